#pragma once

#include <string>

#include "maslov/models.hpp"
#include "maslov/shooting.hpp"
#include "maslov/spectral.hpp"

namespace maslov {

struct EvansSample {
    double lambda = 0.0;
    double value = 0.0;    // D(lambda); may underflow to 0 when log_abs is very negative
    double log_abs = 0.0;  // log |D|
    int sign = 0;
    double x_match = 0.0;
};

enum class DerivativeMethod { ClosedForm, Quadrature, FiniteDifference };

struct DerivativeReport {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    bool has_d2 = false;
    DerivativeMethod method = DerivativeMethod::Quadrature;
};

class EvansError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

EvansSample evans_at(const SystemDefinition& sys, double lambda, double x_match,
                     const TruncationChoice& trunc);
EvansSample evans_at(const SystemDefinition& sys, double lambda, double x_match = 0.0);

// D'(0) = int (A_lambda eta^-) ^ Y~+ dx by composite Simpson on the
// truncation window. Requires D(0) = 0 (relative to the integrand scale).
DerivativeReport evans_dprime0(const SystemDefinition& sys, const TruncationChoice& trunc,
                               int nodes = 4001);

// Closed form k_- k_+ (d/ds int u^2 dx) with k_-, k_+ taken as +1; only the
// sign is meaningful. Returns 0 at p = 4.
double evans_d2prime0_gkdv(const GkdvModel& m);
int evans_d2prime0_gkdv_sign(const GkdvModel& m);

// One-sided finite differences in lambda from samples at 0, -h, -2h.
double evans_dprime0_fd(const SystemDefinition& sys, const TruncationChoice& trunc, double h = 1e-3);
double evans_d2prime0_fd(const SystemDefinition& sys, const TruncationChoice& trunc, double h = 1e-2);

// D(lambda_probe) for systems with A_- = A_+; throws otherwise.
double evans_infinity_check(const SystemDefinition& sys, double lambda_probe,
                            const TruncationChoice& trunc);

// Corner contribution at (lambda = 0, x = +inf). d_sign is the sign of the
// first nonvanishing derivative of D at 0 and `order` its order; psi2_sign
// is the sign of psi2 at large x for lambda slightly below 0.
int corner_increment(int d_sign, int order, int psi2_sign);

}  // namespace maslov
