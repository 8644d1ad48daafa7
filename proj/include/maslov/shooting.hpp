#pragma once

#include <utility>
#include <vector>

#include "maslov/exterior.hpp"
#include "maslov/ode.hpp"
#include "maslov/spectral.hpp"

namespace maslov {

struct TruncationChoice {
    double L_minus = 25.0;
    double L_plus = 25.0;
    double rtol = 1e-10;
    double atol = 1e-12;

    OdeOptions ode() const {
        OdeOptions o;
        o.rtol = rtol;
        o.atol = atol;
        return o;
    }
};

TruncationChoice default_truncation(const SystemDefinition& sys);

// Rescaled solution of one shooting problem at fixed lambda. For the
// forward problem the state is u^- = exp(-mu_- x) eta^-; for the backward
// problem it is U~+ = exp(mu_+ x) Y~+. Values between nodes are obtained by
// re-integrating from the nearest node, so they carry full tolerance.
class ShootingPath {
public:
    ShootingPath() = default;

    double lambda() const { return lambda_; }
    const AsymptoticSpectrum& spectrum() const { return spec_; }
    const DenseSolution& nodes() const { return sol_; }
    double start() const { return sol_.x.front(); }
    double end() const { return sol_.x.back(); }

    // Value at x (log scale returned separately); x must lie between start
    // and the far end reached so far. Exact re-integration.
    Vec at(double x, double* log_scale = nullptr) const;
    // Cubic Hermite value (cheap, for plotting).
    Vec approx(double x) const { return sol_.interpolate(x); }

    // Extend the path so that it covers x.
    void extend_to(double x);

private:
    friend ShootingPath integrate_eta_minus(const SystemDefinition&, double, const TruncationChoice&,
                                            double, const AsymptoticSpectrum*);
    friend ShootingPath integrate_ytilde_plus(const SystemDefinition&, double, const TruncationChoice&,
                                              double, const AsymptoticSpectrum*);
    const SystemDefinition* sys_ = nullptr;
    double lambda_ = 0.0;
    AsymptoticSpectrum spec_;
    Rhs rhs_;
    OdeOptions opt_;
    DenseSolution sol_;
};

// u' = (A(x; lambda) - mu_- I) u forward from -L_minus with u = v^-(lambda),
// up to x_end.
ShootingPath integrate_eta_minus(const SystemDefinition& sys, double lambda,
                                 const TruncationChoice& trunc, double x_end,
                                 const AsymptoticSpectrum* spec = nullptr);

// U' = (A~(x; lambda) + mu_+ I) U backward from +L_plus with U = V~+(lambda),
// down to x_end.
ShootingPath integrate_ytilde_plus(const SystemDefinition& sys, double lambda,
                                   const TruncationChoice& trunc, double x_end,
                                   const AsymptoticSpectrum* spec = nullptr);

struct PsiPair {
    double psi1 = 0.0;
    double psi2 = 0.0;
};

// (u ^ V~+, u ^ V~_M+) / (|u| |V~+|).
PsiPair psi_pair_at(const OneForm& u, const AsymptoticSpectrum& spec);
// Same normalization with an explicit detection pair (V, V_M).
PsiPair psi_pair_with(const OneForm& u, const CoForm& V, const CoForm& VM);

// Finite-c pair: Y~+(c; lambda) replaces V~+, and its image under M
// replaces V~_M+. psi1 is the normalized Evans function evaluated at x = c.
PsiPair finite_c_pair(const SystemDefinition& sys, double lambda, double c,
                      const TruncationChoice& trunc);
PsiPair finite_c_pair(const SystemDefinition& sys, const ShootingPath& eta,
                      const ShootingPath& ytilde, double c);

// Sampled rescaled solutions on an ascending grid.
struct SolutionPath {
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<OneForm> u_minus;
    std::vector<CoForm> u_tilde_plus;
};

SolutionPath solution_path(const SystemDefinition& sys, double lambda, const TruncationChoice& trunc,
                           const std::vector<double>& xs);

// Smallest L (clamped to [10, 500]) with |A(+-L; lambda) - A+-(lambda)| < tol * gap on
// the lambda range, where gap = min (mu - mu*) over both ends.
TruncationChoice select_truncation(const SystemDefinition& sys, double lambda_lo, double lambda_hi,
                                   double tol);

}  // namespace maslov
