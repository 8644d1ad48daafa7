#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "maslov/exterior.hpp"
#include "maslov/ode.hpp"

using namespace maslov;

TEST(Integrator, ExponentialGrowth) {
    Rhs f = [](double, const Vec& y, Vec& dy) { dy = y; };
    Vec y0(1);
    y0 << 1.0;
    double ls = 0.0;
    const Vec y = integrate_to(f, 0.0, y0, 3.0, {}, &ls);
    EXPECT_NEAR(std::exp(ls) * y(0), std::exp(3.0), 1e-8 * std::exp(3.0));
}

TEST(Integrator, BackwardHarmonicOscillator) {
    Rhs f = [](double, const Vec& y, Vec& dy) {
        dy.resize(2);
        dy << y(1), -y(0);
    };
    Vec y0(2);
    y0 << 0.0, 1.0;
    const Vec y = integrate_to(f, 0.0, y0, -2.0);
    EXPECT_NEAR(y(0), std::sin(-2.0), 1e-9);
    EXPECT_NEAR(y(1), std::cos(-2.0), 1e-9);
}

TEST(Integrator, RenormalizationTracksLogScale) {
    Rhs f = [](double, const Vec& y, Vec& dy) { dy = 20.0 * y; };
    Vec y0(1);
    y0 << 1.0;
    double ls = 0.0;
    const Vec y = integrate_to(f, 0.0, y0, 5.0, {}, &ls);
    EXPECT_GT(ls, 0.0);
    EXPECT_NEAR(ls + std::log(y(0)), 100.0, 1e-7);
}

TEST(DenseSolution, HermiteInterpolantAccuracy) {
    Rhs f = [](double, const Vec& y, Vec& dy) {
        dy.resize(2);
        dy << y(1), -y(0);
    };
    Vec y0(2);
    y0 << 0.0, 1.0;
    OdeOptions opt;
    opt.renormalize = false;
    const DenseSolution sol = integrate_dense(f, 0.0, y0, 6.0, opt);
    ASSERT_GT(sol.size(), 2u);
    EXPECT_TRUE(sol.forward());
    for (double t : {0.37, 2.9, 5.55}) {
        EXPECT_NEAR(sol.interpolate(t)(0), std::sin(t), 1e-5);
    }
}

// The (n-1)-form flow against minors of directly integrated vectors.
TEST(WedgeFlow, ConstantSystemsMatchMinors) {
    std::mt19937 rng(2024);
    std::normal_distribution<double> g;
    for (int n : {3, 4}) {
        for (int trial = 0; trial < 10; ++trial) {
            Mat A(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A(i, j) = g(rng);
            Mat Y0(n, n - 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n - 1; ++j) Y0(i, j) = g(rng);
            const Mat B = A.trace() * Mat::Identity(n, n) + induced_matrix(A);
            Rhs f = [&](double, const Vec& c, Vec& dc) { dc = B * c; };
            OdeOptions opt;
            opt.renormalize = false;
            opt.rtol = 1e-12;
            opt.atol = 1e-14;
            const Vec C = integrate_to(f, 0.0, columns_to_coform(Y0), 2.0, opt);
            const Eigen::MatrixXd E = (2.0 * Eigen::MatrixXd(A)).exp();
            const Vec ref = columns_to_coform(Mat(E * Eigen::MatrixXd(Y0)));
            EXPECT_LT((C - ref).norm(), 1e-8 * ref.norm());
        }
    }
}
