#include "maslov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace maslov {

namespace {

using cd = std::complex<double>;

bool ordered_before(const cd& a, const cd& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
}

double polish_real_root(double x, double a, double b, double c) {
    for (int it = 0; it < 3; ++it) {
        const double f = ((x + a) * x + b) * x + c;
        const double df = (3 * x + 2 * a) * x + b;
        if (df == 0.0) break;
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

Vec null_vector(const Mat& B) {
    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
    return svd.matrixV().col(B.cols() - 1);
}

void orient_first_positive(Vec& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12 * scale) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

}  // namespace

std::array<cd, 3> cubic_roots(double a, double b, double c) {
    // Depressed cubic t^3 + p t + q with x = t - a/3.
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = (q * q) / 4.0 + (p * p * p) / 27.0;
    std::array<cd, 3> r;
    if (p == 0.0 && q == 0.0) {
        r = {cd(-shift), cd(-shift), cd(-shift)};
    } else if (disc < 0.0) {
        // Three distinct real roots, trigonometric form.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double th = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0);
            r[k] = cd(polish_real_root(t - shift, a, b, c));
        }
    } else {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        const double t1 = u + v;
        const double x1 = polish_real_root(t1 - shift, a, b, c);
        // Remaining quadratic x^2 + (a + x1) x + (b + x1 (a + x1)).
        const double bb = a + x1;
        const double cc = b + x1 * bb;
        const double dq = bb * bb - 4.0 * cc;
        if (dq >= 0.0) {
            const double s = std::sqrt(dq);
            const double qq = -0.5 * (bb + std::copysign(s, bb));
            const double x2 = qq;
            const double x3 = (qq != 0.0) ? cc / qq : 0.0;
            r = {cd(x1), cd(x2), cd(x3)};
        } else {
            const double re = -bb / 2.0, im = std::sqrt(-dq) / 2.0;
            r = {cd(x1), cd(re, im), cd(re, -im)};
        }
    }
    std::sort(r.begin(), r.end(), ordered_before);
    return r;
}

std::vector<cd> ordered_eigenvalues(const Mat& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("ordered_eigenvalues: matrix not square");
    std::vector<cd> ev;
    if (A.rows() == 3) {
        const double tr = A.trace();
        const double m2 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) + A(0, 0) * A(2, 2) -
                          A(0, 2) * A(2, 0) + A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
        const double det = A.determinant();
        const auto r = cubic_roots(-tr, m2, -det);
        ev.assign(r.begin(), r.end());
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A), false);
        const auto vals = es.eigenvalues();
        for (Eigen::Index i = 0; i < vals.size(); ++i) ev.push_back(vals(i));
        std::sort(ev.begin(), ev.end(), ordered_before);
    }
    return ev;
}

LeadingPair leading_eigenpair(const Mat& A) {
    LeadingPair lp;
    lp.eigenvalues = ordered_eigenvalues(A);
    const cd top = lp.eigenvalues[0];
    const cd next = lp.eigenvalues.size() > 1 ? lp.eigenvalues[1] : cd(-INFINITY);
    if (std::abs(top.imag()) > kGapTolerance || top.real() - next.real() <= kGapTolerance) {
        throw SpectralGapError("assumption-C violation: leading eigenvalue is not real and simple", top,
                               next);
    }
    lp.mu = top.real();
    lp.mu_star = next.real();
    const Eigen::Index n = A.rows();
    const Mat B = A - lp.mu * Mat::Identity(n, n);
    lp.v = null_vector(B);
    orient_first_positive(lp.v);
    Vec wt = null_vector(B.transpose());
    const double wv = wt.dot(lp.v);
    lp.w = (wt / wv).transpose();
    return lp;
}

CoForm vtilde_m(const Mat& M, double m_sign, const CoForm& vtilde_plus) {
    return m_sign * coform_pushforward(M, vtilde_plus);
}

AsymptoticSpectrum spectral_data(const SystemDefinition& sys, double lambda,
                                 const AsymptoticSpectrum* previous) {
    const LeadingPair lm = leading_eigenpair(sys.a_minus(lambda));
    const LeadingPair lp = leading_eigenpair(sys.a_plus(lambda));
    AsymptoticSpectrum out;
    out.lambda = lambda;
    out.mu_minus = lm.mu;
    out.mu_plus = lp.mu;
    out.mu_star_minus = lm.mu_star;
    out.mu_star_plus = lp.mu_star;
    out.v_plus = lp.v;
    const Eigen::Index n = sys.n;

    if (sys.scaling == Scaling::Balanced) {
        const Vec vhat = lm.v / lm.v(0);
        const RowVec what = lp.w / lp.w(n - 1);
        const double t = what.dot(vhat.transpose());
        if (!(t > 0.0)) {
            throw std::runtime_error("balanced scaling requires a positive pairing w^+ v^-");
        }
        out.kappa = 1.0 / std::sqrt(t);
        out.v_minus = out.kappa * vhat;
        out.w_plus = out.kappa * what;
        out.vtilde_plus = tilde_eigvec_from_left(out.w_plus);
    } else {
        out.kappa = 1.0;
        out.v_minus = lm.v.normalized();
        CoForm vt = tilde_eigvec_from_left(lp.w);
        vt.normalize();
        out.vtilde_plus = vt;
        out.w_plus = left_from_tilde_eigvec(vt);
    }

    if (previous != nullptr && previous->v_minus.size() == out.v_minus.size()) {
        if (out.v_minus.dot(previous->v_minus) < 0) out.v_minus = -out.v_minus;
        if (out.vtilde_plus.dot(previous->vtilde_plus) < 0) {
            out.vtilde_plus = -out.vtilde_plus;
            out.w_plus = -out.w_plus;
        }
    }
    out.vtilde_m_plus = vtilde_m(sys.m_matrix, sys.m_sign, out.vtilde_plus);
    return out;
}

double coalescence_lambda_gkdv(double s) {
    if (!(s > 0.0)) throw std::domain_error("coalescence_lambda_gkdv: s must be positive");
    return -2.0 * std::pow(s / 3.0, 1.5);
}

}  // namespace maslov
