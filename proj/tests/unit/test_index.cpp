#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "maslov/index.hpp"
#include "maslov/models.hpp"

using namespace maslov;
using std::numbers::pi;

TEST(ShelfIndex, ConstantPairHasNoWinding) {
    const auto r = shelf_index([](double) { return PsiPair{0.3, 0.8}; }, 0.0, 1.0);
    EXPECT_EQ(r.index, 0);
    EXPECT_TRUE(r.crossings.empty());
}

TEST(ShelfIndex, AnalyticRotationHasOneNegativeCrossing) {
    const auto r = shelf_index([](double t) { return PsiPair{std::cos(pi * t), std::sin(pi * t)}; }, 0.0, 1.0);
    ASSERT_EQ(r.crossings.size(), 1u);
    EXPECT_NEAR(r.crossings[0].location, 0.5, 1e-9);
    EXPECT_EQ(r.crossings[0].direction, -1);
    EXPECT_EQ(r.index, -1);
}

TEST(ShelfIndex, ReversedTraversalFlipsIndex) {
    auto f = [](double t) { return PsiPair{std::cos(pi * t), std::sin(pi * t)}; };
    EXPECT_EQ(shelf_index(f, 1.0, 0.0).index, 1);
}

TEST(ShelfIndex, FastWindingIsResolved) {
    // Five full turns of the undoubled angle in one unit: ten crossings.
    auto f = [](double t) { return PsiPair{std::sin(10 * pi * t + 0.1), std::cos(10 * pi * t + 0.1)}; };
    const auto r = shelf_index(f, 0.0, 1.0);
    EXPECT_EQ(r.crossings.size(), 10u);
    EXPECT_EQ(r.index, 10);
}

TEST(ShelfIndex, FromPathMatchesRefinedVersion) {
    PsiPath path;
    for (int i = 0; i <= 400; ++i) {
        const double t = i / 400.0;
        path.push(t, {std::cos(pi * t), std::sin(pi * t)});
    }
    EXPECT_EQ(shelf_index_from_path(path).index, -1);
    EXPECT_NEAR(path.invariance_min(), 1.0, 1e-12);
}

TEST(ShelfIndex, InvarianceLossIsReported) {
    const auto r = shelf_index([](double t) { return PsiPair{t - 0.5, 0.0}; }, 0.0, 1.0);
    EXPECT_TRUE(r.broken);
}

TEST(CrossingDirection, Rules) {
    EXPECT_EQ(crossing_direction(-2.0, 0.5), -1);
    EXPECT_EQ(crossing_direction(2.0, 0.5), 1);
    EXPECT_EQ(crossing_direction(1.0, -0.5), -1);
    EXPECT_EQ(crossing_direction(1e-14, 0.5, 1e-12), 0);
}

TEST(EndpointAdjust, NonCrossingEndpointIsZero) {
    TrackingAngle a;
    a.ts = {0.0, 1.0};
    a.theta = {0.5, 1.0};
    EXPECT_EQ(endpoint_adjust(a, PathEnd::Start), 0);
    EXPECT_EQ(endpoint_adjust(a, PathEnd::Finish), 0);
}

TEST(Asymptotic, GkdvContributesPlusOne) {
    const auto sys = gkdv_system(GkdvModel(3.5, 0.5));
    const auto ev = asymptotic_right_extension(sys, 0.0, default_truncation(sys), 10.0);
    ASSERT_TRUE(ev.has_value());
    EXPECT_EQ(ev->direction, 1);
}

TEST(Asymptotic, KdvbMonotoneContributesNothing) {
    const auto sys = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    const auto ev = asymptotic_right_extension(sys, 0.0, default_truncation(sys), 24.0);
    EXPECT_TRUE(!ev.has_value() || ev->direction == 0);
}

TEST(Asymptotic, NoneAwayFromSpectrum) {
    const auto sys = gkdv_system(GkdvModel(3.5, 0.5));
    EXPECT_FALSE(asymptotic_right_extension(sys, -1.0, default_truncation(sys), 10.0).has_value());
}

TEST(VerticalShelf, GkdvRightShelfAtZero) {
    const GkdvModel g(3.5, 0.5);
    const auto sys = gkdv_system(g);
    const auto tr = default_truncation(sys);
    const auto r = vertical_shelf(sys, 0.0, -22.0, 22.0, tr);
    ASSERT_EQ(r.crossings.size(), 2u);
    const auto [z1, z2] = gkdv_quadratic_roots(3.5);
    EXPECT_NEAR(std::tanh(g.gamma * r.crossings[0].location), z1, 1e-8);
    EXPECT_NEAR(std::tanh(g.gamma * r.crossings[1].location), z2, 1e-8);
    for (const auto& c : r.crossings) EXPECT_EQ(c.direction, -1);
    EXPECT_EQ(r.index, -2);
    const auto ext = asymptotic_right_extension(sys, 0.0, tr, 10.0);
    ASSERT_TRUE(ext.has_value());
    EXPECT_EQ(r.index + ext->direction, -1);
}

TEST(HorizontalShelf, GkdvBottomShelfHasNoCrossings) {
    const auto sys = gkdv_system(GkdvModel(3.5, 0.5));
    const auto tr = default_truncation(sys);
    const auto r = horizontal_shelf(sys, -tr.L_minus, -7.0, 0.0, tr);
    EXPECT_EQ(r.index, 0);
    EXPECT_TRUE(r.crossings.empty());
}

TEST(TopShelf, UnstableEigenvalue) {
    const auto sys = gkdv_system(GkdvModel(4.5, 0.5));
    const auto tr = default_truncation(sys);
    const auto r = top_shelf_eigenvalues(sys, -5.0, -0.01, tr.L_plus, tr);
    ASSERT_EQ(r.eigenvalues.size(), 1u);
    EXPECT_NEAR(r.eigenvalues[0].location, -0.0959, 0.002);
    EXPECT_EQ(r.eigenvalues[0].direction, -1);
}

TEST(TopShelf, StableCasesEmpty) {
    const auto g = gkdv_system(GkdvModel(3.5, 0.5));
    EXPECT_TRUE(top_shelf_eigenvalues(g, -5.0, -0.01, 25.0, default_truncation(g)).eigenvalues.empty());
    const auto k = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    const auto tr = default_truncation(k);
    EXPECT_TRUE(top_shelf_eigenvalues(k, -5.0, -0.01, tr.L_plus, tr).eigenvalues.empty());
}

TEST(Box, StableGkdv) {
    const auto sys = gkdv_system(GkdvModel(3.5, 0.5));
    const auto box = maslov_box(sys, -7.0, 0.0, -5.0, 5.0, {65, 65}, default_truncation(sys));
    ASSERT_TRUE(box.m.has_value());
    EXPECT_EQ(*box.m, -2);
    EXPECT_EQ(box.bottom.index, 0);
    EXPECT_EQ(box.left.index, 0);
    EXPECT_EQ(box.top.index, 0);
    EXPECT_EQ(box.right.index, -2);
}

TEST(Box, UnstableGkdv) {
    const auto sys = gkdv_system(GkdvModel(4.5, 0.5));
    const auto box = maslov_box(sys, -7.0, 0.0, -5.0, 5.0, {65, 65}, default_truncation(sys));
    ASSERT_TRUE(box.m.has_value());
    EXPECT_EQ(*box.m, -2);
}

TEST(Box, MonotoneKdvb) {
    const auto sys = kdvb_system(std::make_shared<KdvbModel>(0.125, 60.0));
    const auto box = maslov_box(sys, -5.0, 0.0, -20.0, 20.0, {65, 65}, default_truncation(sys));
    ASSERT_TRUE(box.m.has_value());
    EXPECT_EQ(*box.m, 0);
    for (const auto* s : {&box.bottom, &box.right, &box.top, &box.left}) EXPECT_TRUE(s->crossings.empty());
    for (double v : box.bottom.path.psi1) EXPECT_GT(v, 0.0);
}

TEST(ExchangeParity, IdenticalMatrixGivesZero) {
    const auto sys = gkdv_system(GkdvModel(3.5, 0.5));
    const auto r = exchange_parity_check(sys, 0.0, -5.0, 5.0, sys.m_matrix, default_truncation(sys));
    EXPECT_EQ(r.difference, 0);
}

TEST(ExchangeParity, RandomMatricesGiveEvenDifferences) {
    const GkdvModel g(3.5, 0.5);
    const auto sys = gkdv_system(g);
    const auto tr = default_truncation(sys);
    const auto [z1, z2] = gkdv_quadratic_roots(3.5);
    const double x1 = std::atanh(z1) / g.gamma, x2 = std::atanh(z2) / g.gamma;
    std::mt19937 rng(17);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 5; ++trial) {
        Mat M(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M(i, j) = n01(rng);
        const auto r = exchange_parity_check(sys, 0.0, x1 - 1.0, x2 + 1.0, M, tr);
        if (r.inconclusive) continue;
        EXPECT_EQ(r.difference % 2, 0);
    }
}

TEST(CountBound, ModelCases) {
    EXPECT_EQ(count_bound({-1, 0, 0, -2, 0}), 1);
    EXPECT_EQ(count_bound({-1, 0, 0, -2, 1}), 0);
    EXPECT_EQ(count_bound({0, 0, 0, 0, 0}), 0);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_GE(worker_count(), 1u);
}
