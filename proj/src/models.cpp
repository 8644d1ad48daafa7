#include "maslov/models.hpp"

#include <algorithm>
#include <cmath>

#include "maslov/ode.hpp"

namespace maslov {

// ---------------------------------------------------------------- gKdV ----

GkdvModel::GkdvModel(double p_, double s_) : p(p_), s(s_) {
    if (!(p >= 1.0)) throw ModelError("gKdV: p must be at least 1");
    if (!(s > 0.0)) throw ModelError("gKdV: s must be positive");
    alpha = std::pow(0.5 * s * (p + 1.0) * (p + 2.0), 1.0 / p);
    gamma = p * std::sqrt(s) / 2.0;
}

WaveJet GkdvModel::jet(double x) const {
    const double y = gamma * x;
    const double ay = std::abs(y);
    // log cosh computed without overflow for large |y|.
    const double lcosh = ay + std::log1p(std::exp(-2.0 * ay)) - std::log(2.0);
    WaveJet j;
    j.u = alpha * std::exp(-(2.0 / p) * lcosh);
    j.u1 = -(2.0 * gamma / p) * j.u * std::tanh(y);
    const double up = std::pow(j.u, p);
    j.u2 = s * j.u - up * j.u / (p + 1.0);
    j.u3 = (s - up) * j.u1;
    return j;
}

std::pair<double, double> GkdvModel::a_and_da(double x) const {
    const WaveJet j = jet(x);
    const double upm1 = std::pow(j.u, p - 1.0);
    return {upm1 * j.u - s, p * upm1 * j.u1};
}

double GkdvModel::wave_residual(double x) const {
    const WaveJet j = jet(x);
    return j.u2 - s * j.u + std::pow(j.u, p + 1.0) / (p + 1.0);
}

SystemDefinition gkdv_system(const GkdvModel& m) {
    SystemDefinition sys;
    sys.n = 3;
    sys.coeff = [m](double x, double lambda) {
        const auto [a, da] = m.a_and_da(x);
        Mat A = Mat::Zero(3, 3);
        A(0, 1) = 1.0;
        A(1, 2) = 1.0;
        A(2, 0) = -lambda - da;
        A(2, 1) = -a;
        return A;
    };
    auto asym = [s = m.s](double lambda) {
        Mat A = Mat::Zero(3, 3);
        A(0, 1) = 1.0;
        A(1, 2) = 1.0;
        A(2, 0) = -lambda;
        A(2, 1) = s;
        return A;
    };
    sys.a_minus = asym;
    sys.a_plus = asym;
    Mat M(3, 3);
    const double rs = std::sqrt(m.s);
    M << 0.0, 1.0, 1.0 / rs, 1.0, 0.0, 0.0, 1.0, 0.0, -1.0 / m.s;
    sys.m_matrix = M;
    sys.m_sign = 1.0;
    sys.scaling = Scaling::Balanced;
    sys.lambda_max = 0.0;
    sys.label = "gkdv";
    return sys;
}

std::pair<double, double> gkdv_shelf_zero(const GkdvModel& m, double x) {
    const WaveJet j = m.jet(x);
    const double mu = 2.0 * m.gamma / m.p;  // = sqrt(s)
    return {mu * j.u2 + j.u3, j.u1 / mu};
}

std::pair<double, double> gkdv_quadratic_roots(double p) {
    const double a = (p + 1.0) * (p + 2.0);
    const double b = p * (p + 2.0);
    const double c = -p;
    const double d = std::sqrt(b * b - 4.0 * a * c);
    // Cancellation-free pair.
    const double q = -0.5 * (b + d);
    const double r1 = q / a;
    const double r2 = c / q;
    return {std::min(r1, r2), std::max(r1, r2)};
}

// ------------------------------------------------------- KdV-Burgers ------

namespace {

constexpr double kSaddleOffset = 1e-8;
constexpr double kSettle = 1e-13;

}  // namespace

KdvbModel::KdvbModel(double nu, double L) : nu_(nu) {
    if (!(nu > 0.0)) throw ModelError("KdV-Burgers: nu must be positive");
    if (std::abs(nu - 0.25) < 1e-12) throw ModelError("KdV-Burgers: nu = 1/4 is excluded");
    if (!(L > 0.0)) throw ModelError("KdV-Burgers: L must be positive");
    mu_saddle_ = (-1.0 + std::sqrt(1.0 + 4.0 * nu)) / (2.0 * nu);

    const Rhs planar = [nu](double, const Vec& y, Vec& dy) {
        dy.resize(2);
        dy(0) = y(1);
        dy(1) = (0.5 * (y(0) * y(0) - 1.0) - y(1)) / nu;
    };
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-15;
    opt.h_max = 0.01;
    opt.renormalize = false;

    Vec y(2);
    y << 1.0 - kSaddleOffset, -kSaddleOffset * mu_saddle_;
    std::vector<double> xs{0.0};
    std::vector<Vec> ys{y};
    std::vector<Vec> fs;
    {
        Vec f(2);
        planar(0.0, y, f);
        fs.push_back(f);
    }

    double x = 0.0;
    double x_zero = NAN;
    const double chunk = 20.0;
    const double budget = 20000.0;
    while (true) {
        DenseSolution seg = integrate_dense(planar, x, ys.back(), x + chunk, opt);
        for (std::size_t k = 1; k < seg.size(); ++k) {
            if (std::isnan(x_zero) && ys.back()(0) > 0.0 && seg.y[k](0) <= 0.0) {
                // First zero: refine on the Hermite interpolant.
                double a = xs.back(), b = seg.x[k];
                for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
                    const double mid = 0.5 * (a + b);
                    if (seg.interpolate(mid)(0) > 0.0) a = mid; else b = mid;
                }
                x_zero = 0.5 * (a + b);
            }
            xs.push_back(seg.x[k]);
            ys.push_back(seg.y[k]);
            fs.push_back(seg.f[k]);
        }
        x += chunk;
        const Vec& last = ys.back();
        if (!last.allFinite() || std::abs(last(0)) > 10.0) {
            throw ModelError("KdV-Burgers: wave construction diverged");
        }
        const bool settled = std::abs(last(0) + 1.0) + std::abs(last(1)) < kSettle;
        if (!std::isnan(x_zero) && settled && x - x_zero >= L) break;
        if (x > budget) throw ModelError("KdV-Burgers: wave failed to settle at (-1, 0)");
    }

    // Uniform table, shifted so that u(0) = 0.
    x0_ = -x_zero;
    const double x_end = x - x_zero;
    const std::size_t N = static_cast<std::size_t>(std::floor((x_end - x0_) / h_)) + 1;
    u_.resize(N);
    up_.resize(N);
    std::size_t k = 0;
    double umax = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double xi = static_cast<double>(i) * h_;  // provisional coordinate
        while (k + 2 < xs.size() && xs[k + 1] < xi) ++k;
        const double hk = xs[k + 1] - xs[k];
        const double s = std::clamp((xi - xs[k]) / hk, 0.0, 1.0);
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        const Vec v = h00 * ys[k] + h10 * hk * fs[k] + h01 * ys[k + 1] + h11 * hk * fs[k + 1];
        u_[i] = v(0);
        up_[i] = v(1);
        umax = std::max(umax, std::abs(v(0)));
    }
    left_offset_ = u_.front() - 1.0;
    c_sup_ = std::max(1.0, umax) + 1e-6;
}

WaveJet KdvbModel::jet(double x) const {
    WaveJet j;
    if (x <= x0_) {
        // Linearization about the saddle: u - 1 = offset * exp(mu (x - x0)).
        const double e = left_offset_ * std::exp(mu_saddle_ * (x - x0_));
        j.u = 1.0 + e;
        j.u1 = mu_saddle_ * e;
    } else if (x >= x_max()) {
        j.u = u_.back();
        j.u1 = up_.back();
    } else {
        const double t = (x - x0_) / h_;
        const std::size_t i = std::min(static_cast<std::size_t>(t), u_.size() - 2);
        const double s = t - static_cast<double>(i);
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        auto u2_at = [&](std::size_t m) { return (0.5 * (u_[m] * u_[m] - 1.0) - up_[m]) / nu_; };
        j.u = h00 * u_[i] + h10 * h_ * up_[i] + h01 * u_[i + 1] + h11 * h_ * up_[i + 1];
        j.u1 = h00 * up_[i] + h10 * h_ * u2_at(i) + h01 * up_[i + 1] + h11 * h_ * u2_at(i + 1);
    }
    j.u2 = (0.5 * (j.u * j.u - 1.0) - j.u1) / nu_;
    j.u3 = (j.u * j.u1 - j.u2) / nu_;
    return j;
}

double KdvbModel::table_residual(std::size_t i) const {
    if (i == 0 || i + 1 >= u_.size()) return 0.0;
    const double u2 = (up_[i + 1] - up_[i - 1]) / (2.0 * h_);
    return nu_ * u2 + up_[i] - 0.5 * (u_[i] * u_[i] - 1.0);
}

SystemDefinition kdvb_system(std::shared_ptr<const KdvbModel> m) {
    SystemDefinition sys;
    sys.n = 3;
    const double nu = m->nu();
    sys.coeff = [m, nu](double x, double lambda) {
        const WaveJet j = m->jet(x);
        Mat A = Mat::Zero(3, 3);
        A(0, 1) = 1.0;
        A(1, 2) = 1.0 / nu;
        A(2, 0) = j.u1 - lambda;
        A(2, 1) = j.u;
        A(2, 2) = -1.0 / nu;
        return A;
    };
    auto asym = [nu](double u_end) {
        return [nu, u_end](double lambda) {
            Mat A = Mat::Zero(3, 3);
            A(0, 1) = 1.0;
            A(1, 2) = 1.0 / nu;
            A(2, 0) = -lambda;
            A(2, 1) = u_end;
            A(2, 2) = -1.0 / nu;
            return A;
        };
    };
    sys.a_minus = asym(1.0);
    sys.a_plus = asym(-1.0);
    Mat M(3, 3);
    M << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0;
    sys.m_matrix = M;
    sys.m_sign = -1.0;
    sys.scaling = Scaling::UnitNorm;
    sys.lambda_max = 0.0;
    sys.label = "kdvb";
    return sys;
}

std::pair<double, double> kdvb_shelf_zero(const KdvbModel& m, double x) {
    const WaveJet j = m.jet(x);
    return {-j.u1 * (j.u + 1.0), j.u2};
}

double kdvb_left_shelf_bound(double nu, double C) {
    if (!(nu > 0.0) || !(C > 0.0)) throw ModelError("left-shelf bound needs nu > 0 and C > 0");
    const double eps = std::min(nu / 4.0, 1.0 / (3.0 * C));
    const double delta = eps;
    return -(1.0 / (2.0 * eps * delta) + 3.0 * C / (2.0 * eps));
}

double kdvb_left_shelf_bound(const KdvbModel& m) { return kdvb_left_shelf_bound(m.nu(), m.c_sup()); }

}  // namespace maslov
