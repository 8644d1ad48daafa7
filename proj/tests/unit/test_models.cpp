#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "maslov/models.hpp"
#include "oracle_values.hpp"

using namespace maslov;

TEST(Gkdv, ProfilePeakAndWaveEquation) {
    const GkdvModel g(2.0, 1.0);
    EXPECT_DOUBLE_EQ(g.jet(0.0).u, g.alpha);
    EXPECT_NEAR(g.jet(0.0).u1, 0.0, 1e-15);
    // p = 2, s = 1: alpha^2 = 6, gamma = 1.
    EXPECT_NEAR(g.alpha, std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(g.gamma, 1.0, 1e-14);
    const GkdvModel h(3.5, 0.5);
    for (double x : {-4.0, -1.0, 0.2, 3.0}) EXPECT_NEAR(h.wave_residual(x), 0.0, 1e-12);
}

TEST(Gkdv, DerivativesAgreeWithDifferences) {
    const GkdvModel g(3.5, 0.5);
    const double x = 0.7, h = 1e-5;
    EXPECT_NEAR(g.jet(x).u1, (g.jet(x + h).u - g.jet(x - h).u) / (2 * h), 1e-8);
    EXPECT_NEAR(g.jet(x).u2, (g.jet(x + h).u1 - g.jet(x - h).u1) / (2 * h), 1e-8);
    EXPECT_NEAR(g.jet(x).u3, (g.jet(x + h).u2 - g.jet(x - h).u2) / (2 * h), 1e-8);
}

TEST(Gkdv, AsymptoticMatrixEigenvalues) {
    const GkdvModel g(3.5, 0.5);
    const auto eig = ordered_eigenvalues(gkdv_system(g).a_plus(0.0));
    const double r = 2.0 * g.gamma / g.p;
    EXPECT_NEAR(eig[0].real(), r, 1e-13);
    EXPECT_NEAR(std::abs(eig[1]), 0.0, 1e-13);
    EXPECT_NEAR(eig[2].real(), -r, 1e-13);
}

TEST(Gkdv, QuadraticRootsForPOne) {
    const auto [z1, z2] = gkdv_quadratic_roots(1.0);
    EXPECT_NEAR(z1, (-3.0 - std::sqrt(33.0)) / 12.0, 1e-14);
    EXPECT_NEAR(z2, (-3.0 + std::sqrt(33.0)) / 12.0, 1e-14);
    EXPECT_NEAR(z1, -0.72871, 1e-5);
    EXPECT_NEAR(z2, 0.22871, 1e-5);
}

TEST(Gkdv, ShelfPairZerosAndLimits) {
    const GkdvModel g(3.5, 0.5);
    const auto [z1, z2] = gkdv_quadratic_roots(3.5);
    for (double z : {z1, z2}) {
        const double x = std::atanh(z) / g.gamma;
        const auto [p1, p2] = gkdv_shelf_zero(g, x);
        EXPECT_NEAR(p1, 0.0, 1e-12);
        EXPECT_NE(p2, 0.0);
    }
    // psi2 changes sign only at x = 0.
    EXPECT_GT(gkdv_shelf_zero(g, -0.5).second, 0.0);
    EXPECT_LT(gkdv_shelf_zero(g, 0.5).second, 0.0);
    EXPECT_GT(gkdv_shelf_zero(g, -0.5).second * gkdv_shelf_zero(g, -6.0).second, 0.0);
}

TEST(Gkdv, CriticalPowerIsAllowedAsAModel) {
    EXPECT_NO_THROW(GkdvModel(4.0, 0.5));
    EXPECT_THROW(GkdvModel(0.5, 0.5), ModelError);
    EXPECT_THROW(GkdvModel(2.0, -1.0), ModelError);
}

TEST(Kdvb, EndStatesAndTranslation) {
    const KdvbModel k(2.0, 60.0);
    EXPECT_NEAR(k.jet(0.0).u, 0.0, 1e-9);
    EXPECT_NEAR(k.jet(-40.0).u, 1.0, 1e-6);
    EXPECT_NEAR(k.jet(60.0).u, -1.0, 1e-6);
    EXPECT_NEAR(k.saddle_rate(), 0.5, 1e-14);
}

TEST(Kdvb, ProfileMatchesReferenceShooting) {
    const KdvbModel k(2.0, 60.0);
    EXPECT_NEAR(k.jet(-5.0).u, oracle::kKdvb2_u_xm5, 1e-6);
    EXPECT_NEAR(k.jet(2.0).u, oracle::kKdvb2_u_x2, 1e-6);
    EXPECT_NEAR(k.jet(5.0).u, oracle::kKdvb2_u_x5, 1e-6);
    EXPECT_NEAR(k.jet(10.0).u, oracle::kKdvb2_u_x10, 1e-6);
    const KdvbModel m(0.125, 60.0);
    EXPECT_NEAR(m.jet(2.0).u, oracle::kKdvb0125_u_x2, 1e-6);
}

TEST(Kdvb, TableResidualSmall) {
    const KdvbModel k(2.0, 60.0);
    for (std::size_t i = 1; i + 1 < k.table_size(); i += 97) EXPECT_NEAR(k.table_residual(i), 0.0, 1e-6);
}

TEST(Kdvb, MonotoneForSmallNu) {
    const KdvbModel k(0.125, 60.0);
    for (double x = -20.0; x <= 30.0; x += 0.05) EXPECT_LT(k.jet(x).u1, 0.0) << x;
}

TEST(Kdvb, OscillatoryForLargeNu) {
    const KdvbModel k(10.0, 60.0);
    int changes = 0;
    double prev = k.jet(0.0).u1;
    for (double x = 0.01; x <= 30.0; x += 0.01) {
        const double cur = k.jet(x).u1;
        if (cur * prev < 0) ++changes;
        prev = cur;
    }
    EXPECT_GE(changes, 3);
}

TEST(Kdvb, RightEndEigenvalues) {
    for (double nu : {0.125, 2.0}) {
        const auto sys = kdvb_system(std::make_shared<KdvbModel>(nu, 60.0));
        const auto eig = ordered_eigenvalues(sys.a_plus(0.0));
        EXPECT_NEAR(std::abs(eig[0]), 0.0, 1e-12);
        const std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 4.0 * nu));
        const std::complex<double> r = (-1.0 + disc) / (2.0 * nu);
        EXPECT_NEAR(std::abs(eig[1] - r) * std::abs(eig[2] - r), 0.0, 1e-12) << nu;
    }
}

TEST(Kdvb, ConjugatedRightMatrixAtZero) {
    const double nu = 2.0;
    const auto sys = kdvb_system(std::make_shared<KdvbModel>(nu, 60.0));
    const Mat M = sys.m_matrix;
    const Mat calA = M * sys.a_plus(0.0) * M.inverse();
    Mat expected(3, 3);
    expected << -1, 1, -1, 0, 0, 0, 1, -1, 1 - 1 / nu;
    EXPECT_LT((calA - expected).norm(), 1e-14);
}

TEST(Kdvb, ShelfPairZerosAtTurningPoints) {
    const KdvbModel k(2.0, 60.0);
    for (double x : {oracle::kKdvb2_turn1, oracle::kKdvb2_turn2, oracle::kKdvb2_turn3}) {
        EXPECT_NEAR(k.jet(x).u1, 0.0, 1e-7) << x;
        EXPECT_NEAR(kdvb_shelf_zero(k, x).first, 0.0, 1e-7);
    }
}

TEST(Kdvb, LeftShelfBound) {
    EXPECT_DOUBLE_EQ(kdvb_left_shelf_bound(0.125, 1.0), -560.0);
    EXPECT_DOUBLE_EQ(kdvb_left_shelf_bound(4.0 / 3.0, 1.0), -9.0);
    const KdvbModel k(2.0, 60.0);
    EXPECT_GT(k.c_sup(), 1.2);
    EXPECT_LT(kdvb_left_shelf_bound(k), kdvb_left_shelf_bound(2.0, 1.0));
}

TEST(Kdvb, ExcludedParameters) {
    EXPECT_THROW(KdvbModel(0.25, 60.0), ModelError);
    EXPECT_THROW(KdvbModel(-1.0, 60.0), ModelError);
}
