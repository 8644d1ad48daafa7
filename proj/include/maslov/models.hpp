#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "maslov/exterior.hpp"
#include "maslov/spectral.hpp"

namespace maslov {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Wave profile and its first three derivatives at a point.
struct WaveJet {
    double u = 0, u1 = 0, u2 = 0, u3 = 0;
};

// ---------------------------------------------------------------- gKdV ----

// Solitary wave u = alpha sech^{2/p}(gamma x) of u_t + u_xxx + (u^{p+1}/(p+1))_x = 0
// moving with speed s.
struct GkdvModel {
    double p = 2.0;
    double s = 1.0;
    double alpha = 0.0;
    double gamma = 0.0;

    GkdvModel() = default;
    GkdvModel(double p_, double s_);

    WaveJet jet(double x) const;
    // a(x) = u^p - s and its derivative.
    std::pair<double, double> a_and_da(double x) const;
    // Residual of u'' - s u + u^{p+1}/(p+1).
    double wave_residual(double x) const;
};

SystemDefinition gkdv_system(const GkdvModel& m);

// Closed-form right-shelf pair at lambda = 0 up to a positive factor:
//   psi1 ~ (2 gamma/p) u'' + u''',   psi2 ~ u'.
std::pair<double, double> gkdv_shelf_zero(const GkdvModel& m, double x);

// Roots z1 < 0 < z2 of (p+1)(p+2) z^2 + p(p+2) z - p, with z = tanh(gamma x).
std::pair<double, double> gkdv_quadratic_roots(double p);

// ------------------------------------------------------- KdV-Burgers ------

// Stationary front of u_t + u u_x = u_xx + nu u_xxx joining u = 1 (x -> -inf)
// to u = -1 (x -> +inf), built by shooting from the saddle (1, 0) of the
// planar wave equation and tabulated on a uniform grid.
class KdvbModel {
public:
    KdvbModel() = default;
    KdvbModel(double nu, double L);

    double nu() const { return nu_; }
    double c_sup() const { return c_sup_; }  // sup |u| over the table plus safety margin
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * static_cast<double>(u_.size() - 1); }
    double table_step() const { return h_; }
    std::size_t table_size() const { return u_.size(); }

    WaveJet jet(double x) const;
    // nu u'' + u' - (u^2 - 1)/2, with u'' taken by central differences of
    // the tabulated u'.
    double table_residual(std::size_t i) const;

    // Exponent of the unstable direction at the saddle.
    double saddle_rate() const { return mu_saddle_; }

private:
    double nu_ = 0.0;
    double x0_ = 0.0;
    double h_ = 1e-3;
    double mu_saddle_ = 0.0;
    double c_sup_ = 1.0;
    double left_offset_ = 0.0;  // u(x0) - 1
    std::vector<double> u_, up_;
};

SystemDefinition kdvb_system(std::shared_ptr<const KdvbModel> m);

// Closed-form right-shelf pair at lambda = 0 up to a positive factor:
//   psi1 ~ -u'(u + 1)  (k_- < 0 folded in),   psi2 ~ u''.
std::pair<double, double> kdvb_shelf_zero(const KdvbModel& m, double x);

// Energy bound below which the half-line problem has no eigenvalues, so the
// left shelf carries no crossings: -(1/(2 eps delta) + 3C/(2 eps)) with
// eps = delta = min(nu/4, 1/(3C)).
double kdvb_left_shelf_bound(double nu, double C);
double kdvb_left_shelf_bound(const KdvbModel& m);

}  // namespace maslov
