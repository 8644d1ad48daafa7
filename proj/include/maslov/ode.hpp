#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maslov/exterior.hpp"

namespace maslov {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;          // 0 selects a starting step automatically
    double h_max = 0.0;           // 0 means unbounded
    std::size_t max_steps = 2'000'000;
    bool renormalize = true;      // rescale when the norm leaves [lo, hi]
    double renorm_lo = 1e-6;
    double renorm_hi = 1e6;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& msg, double x) : std::runtime_error(msg), x_(x) {}
    double x() const { return x_; }

private:
    double x_;
};

using Rhs = std::function<void(double, const Vec&, Vec&)>;

// Accepted steps of an integration. The true solution at node k is
// exp(log_scale[k]) * y[k]; between nodes a cubic Hermite interpolant is
// used. Nodes are stored in integration order (x may decrease).
class DenseSolution {
public:
    std::vector<double> x;
    std::vector<Vec> y;
    std::vector<Vec> f;
    std::vector<double> log_scale;

    std::size_t size() const { return x.size(); }
    bool forward() const { return x.size() < 2 || x.back() >= x.front(); }

    // Index k of the node interval containing t (nodes k, k+1).
    std::size_t locate(double t) const;

    // Hermite interpolant, expressed in the scale of node k. `log_scale_out`
    // receives that node's log scale.
    Vec interpolate(double t, double* log_scale_out = nullptr) const;
};

// Dormand-Prince 5(4) with FSAL and error-per-step control.
DenseSolution integrate_dense(const Rhs& rhs, double x0, const Vec& y0, double x1,
                              const OdeOptions& opt = {});

// Same scheme, returning only the endpoint value (with its log scale).
Vec integrate_to(const Rhs& rhs, double x0, const Vec& y0, double x1, const OdeOptions& opt = {},
                 double* log_scale_out = nullptr);

}  // namespace maslov
