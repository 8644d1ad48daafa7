#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "maslov/evans.hpp"
#include "maslov/models.hpp"
#include "oracle_values.hpp"

using namespace maslov;

namespace {

// p = 1 has a closed-form Evans function ((mu - sqrt s)/(mu + sqrt s))^2,
// where mu is the positive root of mu^3 - s mu + lambda = 0.
double linear_closed_form(double s, double lambda) {
    const auto r = cubic_roots(0.0, -s, lambda);
    const double mu = r[0].real();
    const double q = (mu - std::sqrt(s)) / (mu + std::sqrt(s));
    return q * q;
}

}  // namespace

TEST(Evans, VanishesAtZero) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    EXPECT_NEAR(evans_at(g, 0.0, 0.0, default_truncation(g)).value, 0.0, 1e-8);
    const auto k = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    EXPECT_NEAR(evans_at(k, 0.0, 0.0, default_truncation(k)).value, 0.0, 1e-8);
}

TEST(Evans, IndependentOfMatchingPoint) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    const auto tr = default_truncation(g);
    for (double lambda : {-0.5, -1.0, -2.0}) {
        const double d0 = evans_at(g, lambda, 0.0, tr).value;
        for (double xm : {-2.0, 2.0}) EXPECT_NEAR(evans_at(g, lambda, xm, tr).value, d0, 1e-6 * std::abs(d0));
    }
}

TEST(Evans, LinearCaseClosedForm) {
    const auto g = gkdv_system(GkdvModel(1.0, 0.5));
    const auto tr = default_truncation(g);
    for (double lambda : {-0.2, -1.0, -5.0}) {
        const double ref = linear_closed_form(0.5, lambda);
        EXPECT_NEAR(evans_at(g, lambda, 0.0, tr).value, ref, 1e-7 * ref) << lambda;
    }
}

TEST(Evans, MatchesReferenceShooting) {
    const auto g35 = gkdv_system(GkdvModel(3.5, 0.5));
    const auto tr = default_truncation(g35);
    EXPECT_NEAR(evans_at(g35, -0.5, 0.0, tr).value, oracle::kGkdv35_D_m0p5, 1e-7);
    EXPECT_NEAR(evans_at(g35, -1.0, 0.0, tr).value, oracle::kGkdv35_D_m1, 1e-7);
    EXPECT_NEAR(evans_at(g35, -2.0, 0.0, tr).value, oracle::kGkdv35_D_m2, 1e-7);
    EXPECT_NEAR(evans_at(g35, -4.0, 0.0, tr).value, oracle::kGkdv35_D_m4, 1e-7);
    const auto g45 = gkdv_system(GkdvModel(4.5, 0.5));
    EXPECT_NEAR(evans_at(g45, -0.05, 0.0, tr).value, oracle::kGkdv45_D_m0p05, 1e-9);
    EXPECT_NEAR(evans_at(g45, -0.2, 0.0, tr).value, oracle::kGkdv45_D_m0p2, 1e-9);
    EXPECT_NEAR(evans_at(g45, -1.0, 0.0, tr).value, oracle::kGkdv45_D_m1, 1e-8);
}

TEST(Evans, PositiveFarBelowStableCase) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    EXPECT_GT(evans_at(g, -4.0, 0.0, default_truncation(g)).value, 0.0);
}

TEST(Evans, UnstableCaseSingleSignChange) {
    const auto g = gkdv_system(GkdvModel(4.5, 0.5));
    const auto tr = default_truncation(g);
    int changes = 0;
    double root_lo = 0, root_hi = 0;
    double prev = evans_at(g, -5.0, 0.0, tr).value;
    for (int i = 1; i <= 500; ++i) {
        const double l = -5.0 + 0.01 * i - 1e-3;
        const double cur = evans_at(g, l, 0.0, tr).value;
        if (cur * prev < 0) {
            ++changes;
            root_lo = l - 0.01;
            root_hi = l;
        }
        prev = cur;
    }
    EXPECT_EQ(changes, 1);
    EXPECT_LE(root_lo, oracle::kGkdv45_eigenvalue);
    EXPECT_GE(root_hi, oracle::kGkdv45_eigenvalue);
}

TEST(Evans, StableCaseNoSignChange) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    const auto tr = default_truncation(g);
    for (double l = -5.0; l <= -0.01; l += 0.05) EXPECT_GT(evans_at(g, l, 0.0, tr).value, 0.0) << l;
}

TEST(EvansDerivative, GkdvFirstDerivativeVanishes) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    EXPECT_NEAR(evans_dprime0(g, default_truncation(g)).d1, 0.0, 1e-6);
}

TEST(EvansDerivative, KdvbFirstDerivativeNegative) {
    const auto k = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    const auto tr = default_truncation(k);
    const double q = evans_dprime0(k, tr).d1;
    EXPECT_LT(q, 0.0);
    const double fd = evans_dprime0_fd(k, tr);
    EXPECT_LT(fd, 0.0);
    EXPECT_NEAR(fd, q, 1e-2 * std::abs(q));
}

TEST(EvansDerivative, SecondDerivativeSignDichotomy) {
    for (double p : {1.0, 2.0, 3.0, 3.5}) {
        const GkdvModel m(p, 0.5);
        EXPECT_EQ(evans_d2prime0_gkdv_sign(m), 1) << p;
        const auto sys = gkdv_system(m);
        EXPECT_GT(evans_d2prime0_fd(sys, default_truncation(sys)), 0.0) << p;
    }
    for (double p : {4.5, 5.0}) {
        const GkdvModel m(p, 0.5);
        EXPECT_EQ(evans_d2prime0_gkdv_sign(m), -1) << p;
        const auto sys = gkdv_system(m);
        EXPECT_LT(evans_d2prime0_fd(sys, default_truncation(sys)), 0.0) << p;
    }
    EXPECT_EQ(evans_d2prime0_gkdv_sign(GkdvModel(2.0, 1.0)), 1);
    EXPECT_EQ(evans_d2prime0_gkdv_sign(GkdvModel(4.5, 3.0)), -1);
    EXPECT_EQ(evans_d2prime0_gkdv_sign(GkdvModel(4.0, 0.5)), 0);
}

TEST(EvansInfinity, TendsTowardOne) {
    // The approach to 1 is slow (the far-field rate grows like |lambda|^(1/3)),
    // so only monotone progress toward 1 is checked here.
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    const auto tr = default_truncation(g);
    double prev = evans_infinity_check(g, -5.0, tr);
    for (double l : {-30.0, -300.0, -3000.0}) {
        const double cur = evans_infinity_check(g, l, tr);
        EXPECT_GT(cur, prev);
        EXPECT_LT(cur, 1.0);
        prev = cur;
    }
    EXPECT_GT(prev, 0.6);
}

TEST(EvansInfinity, RejectsDifferentEndStates) {
    const auto k = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    EXPECT_THROW(evans_infinity_check(k, -30.0, default_truncation(k)), EvansError);
}

TEST(CornerIncrement, ModelCases) {
    // gKdV 1 <= p < 4: D'' > 0 (order 2), psi2 < 0 at large x.
    EXPECT_EQ(corner_increment(+1, 2, -1), 1);
    // gKdV p > 4.
    EXPECT_EQ(corner_increment(-1, 2, -1), 0);
    // KdV-Burgers: D' < 0, psi2 > 0.
    EXPECT_EQ(corner_increment(-1, 1, +1), 0);
}
