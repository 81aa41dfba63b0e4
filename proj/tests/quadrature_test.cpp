#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fdnet/quadrature.hpp"

using namespace fdnet;

TEST(Quadrature, PolynomialsAndTranscendentals) {
    EXPECT_NEAR(integrate([](double x) { return x * x * x; }, 0.0, 2.0), 4.0, 1e-12);
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0), -std::expm1(-30.0), 1e-9);
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-8);
}

TEST(Quadrature, ReversedLimitsAndEmptyInterval) {
    EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0), -0.5, 1e-12);
    EXPECT_EQ(integrate([](double) { return 1.0; }, 3.0, 3.0), 0.0);
}

TEST(Quadrature, BreakpointsResolveKinks) {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const double exact = 0.5 * (0.09 + 0.49);
    EXPECT_NEAR(integrate(f, 0.0, 1.0, {}, {0.3}), exact, 1e-14);
}

TEST(Quadrature, JumpIsAcceptedWithinBudget) {
    auto step = [](double x) { return x < 1.0 / 3.0 ? 1.0 : 0.0; };
    const auto r = integrate_detailed(step, 0.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-8);
}

TEST(Quadrature, ReportsNonConvergence) {
    auto wild = [](double x) { return std::sin(1.0 / x); };
    QuadratureSpec shallow{1e-10, 1e-14, 3, 2};
    EXPECT_FALSE(integrate_detailed(wild, 1e-4, 1.0, shallow).converged);
    EXPECT_THROW(integrate(wild, 1e-4, 1.0, shallow), NumericalError);
}

TEST(Quadrature, NonFiniteIntegrandThrows) {
    EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), NumericalError);
}

TEST(Quadrature, EvaluationBudget) {
    QuadratureSpec tiny;
    tiny.max_evaluations = 10;
    EXPECT_THROW(integrate([](double x) { return std::sin(40 * x); }, 0.0, 10.0, tiny), NumericalError);
}

TEST(Quadrature, RejectsBadSpec) {
    QuadratureSpec bad;
    bad.rel_tol = 0.0;
    EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, bad), ConfigError);
}
