#include "maslov/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maslov {

TruncationChoice default_truncation(const SystemDefinition& sys) {
    TruncationChoice t;
    double L = (sys.label == "kdvb") ? 60.0 : 25.0;
    // Slowly decaying waves (small p for gKdV) need a longer window: extend
    // until the coefficient defect at lambda = 0 is negligible.
    if (sys.label == "gkdv" && sys.coeff) {
        auto defect = [&](double x) {
            return std::max((sys.coeff(-x, 0.0) - sys.a_minus(0.0)).norm(),
                            (sys.coeff(x, 0.0) - sys.a_plus(0.0)).norm());
        };
        while (defect(L) > 1e-12 && L < 200.0) L += 5.0;
    }
    t.L_minus = L;
    t.L_plus = L;
    return t;
}

Vec ShootingPath::at(double x, double* log_scale) const {
    const bool fwd = sol_.forward();
    const double lo = fwd ? sol_.x.front() : sol_.x.back();
    const double hi = fwd ? sol_.x.back() : sol_.x.front();
    if (x < lo - 1e-12 || x > hi + 1e-12) {
        throw std::out_of_range("ShootingPath::at: x outside the integrated range");
    }
    // Node k precedes x in integration order for either direction.
    const std::size_t base = sol_.locate(x);
    const double xb = sol_.x[base];
    double ls = 0.0;
    Vec v = (xb == x) ? sol_.y[base] : integrate_to(rhs_, xb, sol_.y[base], x, opt_, &ls);
    if (log_scale) *log_scale = sol_.log_scale[base] + ls;
    return v;
}

void ShootingPath::extend_to(double x) {
    const bool fwd = sol_.forward();
    const double far = sol_.x.back();
    if ((fwd && x <= far) || (!fwd && x >= far)) return;
    DenseSolution more = integrate_dense(rhs_, far, sol_.y.back(), x, opt_);
    const double base_ls = sol_.log_scale.back();
    for (std::size_t k = 1; k < more.size(); ++k) {
        sol_.x.push_back(more.x[k]);
        sol_.y.push_back(more.y[k]);
        sol_.f.push_back(more.f[k]);
        sol_.log_scale.push_back(base_ls + more.log_scale[k]);
    }
}

ShootingPath integrate_eta_minus(const SystemDefinition& sys, double lambda,
                                 const TruncationChoice& trunc, double x_end,
                                 const AsymptoticSpectrum* spec) {
    ShootingPath p;
    p.sys_ = &sys;
    p.lambda_ = lambda;
    p.spec_ = spec ? *spec : spectral_data(sys, lambda);
    const double mu = p.spec_.mu_minus;
    const auto& coeff = sys.coeff;
    p.rhs_ = [coeff, lambda, mu](double x, const Vec& u, Vec& du) {
        du.noalias() = coeff(x, lambda) * u;
        du -= mu * u;
    };
    p.opt_ = trunc.ode();
    const double x0 = -trunc.L_minus;
    if (x_end < x0) throw std::invalid_argument("integrate_eta_minus: x_end below -L");
    p.sol_ = integrate_dense(p.rhs_, x0, p.spec_.v_minus, x_end, p.opt_);
    return p;
}

ShootingPath integrate_ytilde_plus(const SystemDefinition& sys, double lambda,
                                   const TruncationChoice& trunc, double x_end,
                                   const AsymptoticSpectrum* spec) {
    ShootingPath p;
    p.sys_ = &sys;
    p.lambda_ = lambda;
    p.spec_ = spec ? *spec : spectral_data(sys, lambda);
    const double mu = p.spec_.mu_plus;
    const auto& coeff = sys.coeff;
    p.rhs_ = [coeff, lambda, mu](double x, const Vec& U, Vec& dU) {
        dU.noalias() = induced_matrix(coeff(x, lambda)) * U;
        dU += mu * U;
    };
    p.opt_ = trunc.ode();
    const double x0 = trunc.L_plus;
    if (x_end > x0) throw std::invalid_argument("integrate_ytilde_plus: x_end above +L");
    p.sol_ = integrate_dense(p.rhs_, x0, p.spec_.vtilde_plus, x_end, p.opt_);
    return p;
}

PsiPair psi_pair_with(const OneForm& u, const CoForm& V, const CoForm& VM) {
    const double nu = u.norm();
    if (nu == 0.0) throw std::invalid_argument("psi pair: degenerate zero vector");
    const double den = nu * V.norm();
    return {wedge_top(u, V) / den, wedge_top(u, VM) / den};
}

PsiPair psi_pair_at(const OneForm& u, const AsymptoticSpectrum& spec) {
    return psi_pair_with(u, spec.vtilde_plus, spec.vtilde_m_plus);
}

PsiPair finite_c_pair(const SystemDefinition& sys, const ShootingPath& eta,
                      const ShootingPath& ytilde, double c) {
    const Vec u = eta.at(c);
    const Vec U = ytilde.at(c);
    const CoForm UM = vtilde_m(sys.m_matrix, sys.m_sign, U);
    return psi_pair_with(u, U, UM);
}

PsiPair finite_c_pair(const SystemDefinition& sys, double lambda, double c,
                      const TruncationChoice& trunc) {
    const AsymptoticSpectrum spec = spectral_data(sys, lambda);
    const ShootingPath eta = integrate_eta_minus(sys, lambda, trunc, c, &spec);
    const ShootingPath yt = integrate_ytilde_plus(sys, lambda, trunc, c, &spec);
    return finite_c_pair(sys, eta, yt, c);
}

SolutionPath solution_path(const SystemDefinition& sys, double lambda, const TruncationChoice& trunc,
                           const std::vector<double>& xs) {
    SolutionPath out;
    out.lambda = lambda;
    out.xs = xs;
    if (xs.empty()) return out;
    const AsymptoticSpectrum spec = spectral_data(sys, lambda);
    const ShootingPath eta = integrate_eta_minus(sys, lambda, trunc, xs.back(), &spec);
    const ShootingPath yt = integrate_ytilde_plus(sys, lambda, trunc, xs.front(), &spec);
    for (double x : xs) {
        out.u_minus.push_back(eta.at(x));
        out.u_tilde_plus.push_back(yt.at(x));
    }
    return out;
}

TruncationChoice select_truncation(const SystemDefinition& sys, double lambda_lo, double lambda_hi,
                                   double tol) {
    double gap = INFINITY;
    for (double lam : {lambda_lo, lambda_hi}) {
        const LeadingPair lm = leading_eigenpair(sys.a_minus(lam));
        const LeadingPair lp = leading_eigenpair(sys.a_plus(lam));
        gap = std::min({gap, lm.mu - lm.mu_star, lp.mu - lp.mu_star});
    }
    auto defect = [&](double L) {
        double d = 0.0;
        for (double lam : {lambda_lo, lambda_hi}) {
            d = std::max(d, (sys.coeff(-L, lam) - sys.a_minus(lam)).norm());
            d = std::max(d, (sys.coeff(L, lam) - sys.a_plus(lam)).norm());
        }
        return d;
    };
    const double target = tol * gap;
    double L = 10.0;
    while (defect(L) >= target) {
        L += 0.5;
        if (L > 500.0) {
            throw std::runtime_error("select_truncation: tolerance not reachable within L <= 500");
        }
    }
    TruncationChoice t = default_truncation(sys);
    t.L_minus = L;
    t.L_plus = L;
    return t;
}

}  // namespace maslov
