#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sgdephase/numerics.hpp"
#include "test_support.hpp"

namespace sgdephase::numerics {
namespace {

using sgdephase::testing::throws_code;

TEST(Quadrature, PolynomialsAreExact) {
  const auto r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, SmoothAndOscillatory) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value, std::exp(1.0) - 1,
              1e-14);
  const auto osc = integrate([](double x) { return std::sin(50 * x) * std::sin(50 * x); }, 0.0,
                             std::numbers::pi, {.rel_tol = 1e-12});
  EXPECT_NEAR(osc.value, std::numbers::pi / 2, 1e-11);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                           {.rel_tol = 1e-8, .max_panels = 100000});
  EXPECT_NEAR(r.value, 2.0, 1e-7);
}

TEST(Quadrature, BreakpointsHandleKinks) {
  const std::vector<double> breaks = {0.3, -7.0, 3.0};
  const auto r = integrate_piecewise([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, breaks);
  EXPECT_NEAR(r.value, 0.5 * 0.09 + 0.5 * 0.49, 1e-15);
  EXPECT_LE(r.error, 1e-14);
}

TEST(Quadrature, EmptyAndReversedIntervals) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0);
  EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0).value, -0.5, 1e-15);
}

TEST(Quadrature, PanelBudgetExhaustionIsNumericError) {
  EXPECT_TRUE(throws_code(ErrorCode::kNumeric, [] {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0,
              {.rel_tol = 1e-14, .max_panels = 10});
  }));
  EXPECT_TRUE(throws_code(ErrorCode::kNumeric, [] {
    integrate([](double) { return std::nan(""); }, 0.0, 1.0);
  }));
}

TEST(Minimise, GoldenSection) {
  const auto r = golden_section_minimize([](double x) { return (x - 1.7) * (x - 1.7) + 3; }, 0.0,
                                         5.0, 1e-10);
  // Value comparisons resolve a quadratic minimum to about sqrt(eps).
  EXPECT_NEAR(r.x, 1.7, 1e-7);
  EXPECT_NEAR(r.value, 3.0, 1e-14);
}

TEST(Minimise, Brent) {
  const auto r = brent_minimize([](double x) { return std::cos(x); }, 2.0, 4.5);
  EXPECT_NEAR(r.x, std::numbers::pi, 1e-7);
  EXPECT_NEAR(r.value, -1.0, 1e-14);
  EXPECT_GT(r.iterations, 0u);
}

}  // namespace
}  // namespace sgdephase::numerics
