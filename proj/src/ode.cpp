#include "maslov/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maslov {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const Rhs& rhs;
    const OdeOptions& opt;
    Vec k2, k3, k4, k5, k6, k7, tmp, ynew, err;

    Stepper(const Rhs& r, const OdeOptions& o, Eigen::Index n)
        : rhs(r), opt(o), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n) {}

    // One trial step from (x, y) with derivative k1; returns the scaled error norm.
    double trial(double x, const Vec& y, const Vec& k1, double h) {
        tmp = y + h * a21 * k1;
        rhs(x + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        rhs(x + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(x + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(x + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(x + h, tmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(x + h, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            const double r = err(i) / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(y.size()));
    }
};

double initial_step(const Rhs& rhs, double x0, const Vec& y0, const Vec& f0, double dir,
                    const OdeOptions& opt) {
    // Hairer-Norsett-Wanner starting step heuristic.
    auto wnorm = [&](const Vec& v) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y0(i));
            acc += (v(i) / sc) * (v(i) / sc);
        }
        return std::sqrt(acc / static_cast<double>(v.size()));
    };
    const double d0 = wnorm(y0), d1 = wnorm(f0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    Vec y1 = y0 + dir * h0 * f0;
    Vec f1(y0.size());
    rhs(x0 + dir * h0, y1, f1);
    const double d2 = wnorm(f1 - f0) / h0;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                  : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    return std::min(100.0 * h0, h1);
}

template <class OnAccept>
void drive(const Rhs& rhs, double x0, const Vec& y0, double x1, const OdeOptions& opt,
           OnAccept&& on_accept) {
    const Eigen::Index n = y0.size();
    if (!y0.allFinite()) throw IntegrationError("non-finite initial state", x0);
    const double span = std::abs(x1 - x0);
    if (span == 0.0) return;
    const double dir = (x1 > x0) ? 1.0 : -1.0;
    Stepper st(rhs, opt, n);

    double x = x0;
    Vec y = y0;
    Vec f(n);
    rhs(x, y, f);
    double ls = 0.0;

    double h = opt.h_init > 0 ? opt.h_init : initial_step(rhs, x0, y0, f, dir, opt);
    if (opt.h_max > 0) h = std::min(h, opt.h_max);
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x0) + span);

    std::size_t steps = 0;
    bool last = false;
    while (!last) {
        if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted", x);
        if (h >= std::abs(x1 - x)) {
            h = std::abs(x1 - x);
            last = true;
        }
        const double e = st.trial(x, y, f, dir * h);
        if (!std::isfinite(e)) throw IntegrationError("non-finite state during step", x);
        if (e <= 1.0) {
            const double xn = last ? x1 : x + dir * h;
            y = st.ynew;
            f = st.k7;
            x = xn;
            if (opt.renormalize) {
                const double nrm = y.norm();
                if (nrm < opt.renorm_lo || nrm > opt.renorm_hi) {
                    y /= nrm;
                    f /= nrm;
                    ls += std::log(nrm);
                }
            }
            on_accept(x, y, f, ls);
            const double fac = (e == 0.0) ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2)));
            h *= fac;
        } else {
            last = false;
            h *= std::max(0.2, 0.9 * std::pow(e, -0.25));
            if (h < h_min) throw IntegrationError("step size underflow", x);
        }
        if (opt.h_max > 0) h = std::min(h, opt.h_max);
    }
}

}  // namespace

std::size_t DenseSolution::locate(double t) const {
    if (x.size() < 2) return 0;
    if (forward()) {
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1)) - 1;
        return std::min(k, x.size() - 2);
    }
    auto it = std::upper_bound(x.begin(), x.end(), t, [](double a, double b) { return a > b; });
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1)) - 1;
    return std::min(k, x.size() - 2);
}

Vec DenseSolution::interpolate(double t, double* log_scale_out) const {
    if (x.empty()) throw std::logic_error("interpolate on empty solution");
    if (x.size() == 1) {
        if (log_scale_out) *log_scale_out = log_scale[0];
        return y[0];
    }
    const std::size_t k = locate(t);
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double r = std::exp(log_scale[k + 1] - log_scale[k]);
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    if (log_scale_out) *log_scale_out = log_scale[k];
    return h00 * y[k] + h10 * h * f[k] + r * (h01 * y[k + 1] + h11 * h * f[k + 1]);
}

DenseSolution integrate_dense(const Rhs& rhs, double x0, const Vec& y0, double x1,
                              const OdeOptions& opt) {
    DenseSolution sol;
    Vec f0(y0.size());
    rhs(x0, y0, f0);
    sol.x.push_back(x0);
    sol.y.push_back(y0);
    sol.f.push_back(f0);
    sol.log_scale.push_back(0.0);
    drive(rhs, x0, y0, x1, opt, [&](double x, const Vec& y, const Vec& f, double ls) {
        sol.x.push_back(x);
        sol.y.push_back(y);
        sol.f.push_back(f);
        sol.log_scale.push_back(ls);
    });
    return sol;
}

Vec integrate_to(const Rhs& rhs, double x0, const Vec& y0, double x1, const OdeOptions& opt,
                 double* log_scale_out) {
    Vec out = y0;
    double lso = 0.0;
    drive(rhs, x0, y0, x1, opt, [&](double, const Vec& y, const Vec&, double ls) {
        out = y;
        lso = ls;
    });
    if (log_scale_out) *log_scale_out = lso;
    return out;
}

}  // namespace maslov
