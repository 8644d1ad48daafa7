#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maslov/exterior.hpp"

namespace maslov {

// How v^-(lambda) and V~+(lambda) are scaled.
enum class Scaling {
    // v^- = kappa (1, ...), V~+ = kappa (1, ...) with v^- ^ V~+ = 1. This is
    // the solitary-wave convention; it makes D(lambda) -> 1 as lambda -> -inf.
    Balanced,
    // Both vectors have unit Euclidean norm.
    UnitNorm,
};

struct SystemDefinition {
    int n = 0;
    std::function<Mat(double x, double lambda)> coeff;
    std::function<Mat(double lambda)> a_minus;
    std::function<Mat(double lambda)> a_plus;
    Mat m_matrix;
    // Orientation of V~_M relative to the push-forward of V~+ under M. The
    // eigenvector defining omega_2 is only fixed up to scale; this sign
    // selects the representative used by each model.
    double m_sign = 1.0;
    Scaling scaling = Scaling::UnitNorm;
    // Admissible spectral parameter range (upper end is typically 0).
    double lambda_max = 0.0;
    std::string label;
};

struct LeadingPair {
    double mu = 0.0;
    double mu_star = 0.0;  // largest real part among the remaining eigenvalues
    Vec v;                  // right eigenvector, first nonzero entry positive
    RowVec w;               // left eigenvector with w v = 1
    std::vector<std::complex<double>> eigenvalues;  // descending real part
};

struct AsymptoticSpectrum {
    double lambda = 0.0;
    double mu_minus = 0.0, mu_plus = 0.0;
    double mu_star_minus = 0.0, mu_star_plus = 0.0;
    OneForm v_minus;
    OneForm v_plus;
    RowVec w_plus;
    CoForm vtilde_plus;
    CoForm vtilde_m_plus;
    double kappa = 1.0;
};

class SpectralGapError : public std::runtime_error {
public:
    SpectralGapError(const std::string& msg, std::complex<double> a, std::complex<double> b)
        : std::runtime_error(msg), first(a), second(b) {}
    std::complex<double> first, second;
};

inline constexpr double kGapTolerance = 1e-9;

// Roots of x^3 + a x^2 + b x + c, ordered by descending real part and then
// ascending imaginary part.
std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c);

// Eigenvalues of A in the same ordering; n = 3 goes through cubic_roots.
std::vector<std::complex<double>> ordered_eigenvalues(const Mat& A);

LeadingPair leading_eigenpair(const Mat& A);

AsymptoticSpectrum spectral_data(const SystemDefinition& sys, double lambda,
                                 const AsymptoticSpectrum* previous = nullptr);

// Left eigenvector of M A M^{-1} pushed to a co-eigenvector, oriented by
// m_sign. Exposed so alternative M matrices can be tried.
CoForm vtilde_m(const Mat& M, double m_sign, const CoForm& vtilde_plus);

double coalescence_lambda_gkdv(double s);

}  // namespace maslov
