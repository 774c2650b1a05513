#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sgdephase/kernel.hpp"
#include "sgdephase/numerics.hpp"
#include "test_support.hpp"

namespace sgdephase::kernel {
namespace {

using sgdephase::testing::rel_diff;

constexpr double kPi = std::numbers::pi;

// W(w) = Integral_0^tau (cos(w0 t) - 1) e^{i w t} dt by the trapezoid rule.
std::complex<double> window_trapezoid(double omega, double omega0, int steps) {
  const double tau = 2 * kPi / omega0;
  const double h = tau / steps;
  std::complex<double> sum = 0.0;
  for (int k = 1; k < steps; ++k) {
    const double t = k * h;
    sum += (std::cos(omega0 * t) - 1.0) * std::polar(1.0, omega * t);
  }
  // Both endpoint values vanish.
  return sum * h;
}

TEST(Kernel, SpecialValues) {
  EXPECT_DOUBLE_EQ(f_aa(0.0), kPi * kPi);
  EXPECT_NEAR(f_aa(0.5), 1.0 / (0.25 * 0.5625), 1e-13);
  EXPECT_DOUBLE_EQ(f_aa(1.0), kPi * kPi / 4);
  EXPECT_DOUBLE_EQ(f_aa(-1.0), kPi * kPi / 4);
}

TEST(Kernel, ContinuousThroughRemovableSingularities) {
  for (double centre : {0.0, 1.0, -1.0}) {
    const double limit = f_aa(centre);
    for (double eps : {1e-3, 1e-5, 1e-7, 1e-9, 1e-12}) {
      EXPECT_LT(rel_diff(f_aa(centre + eps), limit), 10 * eps) << centre << " + " << eps;
      EXPECT_LT(rel_diff(f_aa(centre - eps), limit), 10 * eps) << centre << " - " << eps;
    }
  }
  // Both sides of the series switch-over agree.
  for (double centre : {0.0, 1.0}) {
    const double below = f_aa(centre + 0.99e-4);
    const double above = f_aa(centre + 1.01e-4);
    EXPECT_LT(rel_diff(below, above), 1e-4);
  }
}

TEST(Kernel, Even) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xi(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = xi(rng);
    EXPECT_LE(rel_diff(f_aa(-x), f_aa(x)), 1e-12) << x;
  }
}

TEST(Kernel, NonNegativeAndPeakedAtZero) {
  const double peak = f_aa(0.0);
  for (int i = -100000; i <= 100000; ++i) {
    const double x = i * 1e-4;
    const double v = f_aa(x);
    ASSERT_GE(v, 0.0) << x;
    ASSERT_LE(v, peak) << x;
  }
}

TEST(Kernel, TailEnvelope) {
  for (double x = 1.5; x < 200.0; x += 0.0137) {
    EXPECT_LE(f_aa(x), 1.0 / (x * x * (x * x - 1) * (x * x - 1)) * (1 + 1e-14)) << x;
  }
}

TEST(Kernel, WindowSpecialValues) {
  const double w0 = 424.35908734186165;
  const double tau = 2 * kPi / w0;
  EXPECT_LT(rel_diff(window_sq(0.0, w0), tau * tau), 1e-14);
  EXPECT_LT(rel_diff(window_sq(0.5 * w0, w0), 4.0 / (w0 * w0) * (64.0 / 9.0)), 1e-13);
}

TEST(Kernel, WindowMatchesBruteForceIntegral) {
  const double w0 = 424.35908734186165;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xi(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double omega = w0 * xi(rng);
    const double brute = std::norm(window_trapezoid(omega, w0, 1000000));
    EXPECT_LT(rel_diff(window_sq(omega, w0), brute), 1e-9) << omega / w0;
  }
}

TEST(Kernel, IntegralOverRealLine) {
  const auto k = kernel_integral();
  EXPECT_LT(rel_diff(k.value, 1.5 * kPi * kPi), 1e-6);
  EXPECT_LT(k.tail_bound, 1e-8 * k.value);
  EXPECT_LT(k.error_estimate, 1e-9 * k.value);
  EXPECT_NEAR(kernel_integral_exact(), 14.8044066, 1e-7);
}

TEST(Kernel, HalfRangeIsHalf) {
  std::vector<double> breaks;
  for (int k = 1; k < 50; ++k) breaks.push_back(k);
  const auto half = numerics::integrate_piecewise(f_aa, 0.0, 50.0, breaks, {.rel_tol = 1e-12});
  EXPECT_LT(std::abs(half.value - 0.75 * kPi * kPi), 2 * tail_bound(50.0));
}

TEST(Kernel, ParsevalIdentity) {
  // Integral |W|^2 dw = 2 pi Integral_0^tau (cos(w0 t) - 1)^2 dt = 6 pi^2 / w0.
  const double w0 = 424.35908734186165;
  const double tau = 2 * kPi / w0;
  const auto time_side = numerics::integrate(
      [w0](double t) { return std::pow(std::cos(w0 * t) - 1.0, 2); }, 0.0, tau,
      {.rel_tol = 1e-13});
  const double time_domain = 2 * kPi * time_side.value;
  const double freq_domain = w0 * (4.0 / (w0 * w0)) * kernel_integral().value;
  EXPECT_LT(rel_diff(time_domain, 6 * kPi * kPi / w0), 1e-12);
  EXPECT_LT(rel_diff(freq_domain, 6 * kPi * kPi / w0), 1e-9);
}

TEST(Kernel, TailBoundDominatesNumericTail) {
  for (double cut : {2.0, 5.0, 20.0}) {
    const auto tail = numerics::integrate(
        [](double u) { return f_aa(1.0 / u) / (u * u); }, 1e-6, 1.0 / cut, {.rel_tol = 1e-10});
    EXPECT_LE(2 * tail.value, tail_bound(cut)) << cut;
  }
}

TEST(Kernel, TransferFunctionsFactorise) {
  ExperimentParams p;
  p.theta0 = 0.7;
  p.accel = 4.0;
  const DerivedModel m = derive(p);
  const double accel_ratio = transfer_accel(0.3 * m.omega0, m, p) / f_aa(0.3);
  const double tilt_ratio = transfer_tilt(0.3 * m.omega0, m, p) / f_aa(0.3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xi(-8.0, 8.0);
  for (int i = 0; i < 20; ++i) {
    const double x = xi(rng);
    EXPECT_LT(rel_diff(transfer_accel(x * m.omega0, m, p) / f_aa(x), accel_ratio), 1e-12);
    EXPECT_LT(rel_diff(transfer_tilt(x * m.omega0, m, p) / f_aa(x), tilt_ratio), 1e-12);
  }

  const double hbar = p.constants.hbar;
  const double c = std::cos(p.theta0);
  const double expect_accel =
      4 * c * c / (hbar * hbar * std::pow(m.omega0, 6)) *
      (m.ctilde_right * m.ctilde_right + m.ctilde_left * m.ctilde_left);
  EXPECT_LT(rel_diff(accel_transfer_prefactor(m, p), expect_accel), 1e-12);
  const double g = 4 * p.constants.gamma_e * p.eta0;
  const double expect_tilt = g * g * std::pow(p.accel * std::sin(p.theta0) / std::pow(m.omega0, 3), 2);
  EXPECT_LT(rel_diff(tilt_transfer_prefactor(m, p), expect_tilt), 1e-12);
}

TEST(Kernel, TransferVanishesWhenDecoupled) {
  ExperimentParams perp;  // theta0 = 90 deg
  const DerivedModel mp = derive(perp);
  ExperimentParams still;
  still.accel = 0.0;
  const DerivedModel ms = derive(still);
  for (double x : {0.0, 0.5, 1.0, 3.3}) {
    EXPECT_EQ(transfer_accel(x * mp.omega0, mp, perp), 0.0);
    EXPECT_EQ(transfer_tilt(x * ms.omega0, ms, still), 0.0);
  }
}

}  // namespace
}  // namespace sgdephase::kernel
