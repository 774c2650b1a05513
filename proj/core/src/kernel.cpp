#include "sgdephase/kernel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "sgdephase/errors.hpp"
#include "sgdephase/numerics.hpp"

namespace sgdephase::kernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCutoff = 50.0;

// sin(u)/u, switching to the series within |u| < pi * 1e-4.
double sinc(double u) {
  if (std::abs(u) < kPi * 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

}  // namespace

double f_aa(double xi) {
  const double x = std::abs(xi);
  if (x < 0.5) {
    const double s = sinc(kPi * x);
    const double d = x * x - 1.0;
    return kPi * kPi * s * s / (d * d);
  }
  if (x < 1.5) {
    // sin^2(pi x) = sin^2(pi eps) and x^2 - 1 = eps (2 + eps), eps exact.
    const double eps = x - 1.0;
    const double s = sinc(kPi * eps);
    const double q = (1.0 + eps) * (2.0 + eps);
    return kPi * kPi * s * s / (q * q);
  }
  const double s = std::sin(kPi * x);
  const double d = x * x - 1.0;
  return s * s / (x * x * d * d);
}

double window_sq(double omega, double omega0) {
  detail::require(omega0 > 0.0, ErrorCode::kInvalidParameter, "omega0 must be positive");
  return 4.0 / (omega0 * omega0) * f_aa(omega / omega0);
}

double tail_bound(double xi_cut) {
  detail::require(xi_cut >= 2.0, ErrorCode::kDomain, "tail bound needs xi_cut >= 2");
  // f <= 1/(xi^6 (1 - 1/xi_cut^2)^2) beyond xi_cut; both tails.
  const double shrink = 1.0 - 1.0 / (xi_cut * xi_cut);
  return 2.0 / (5.0 * std::pow(xi_cut, 5) * shrink * shrink);
}

double kernel_integral_exact() { return 1.5 * kPi * kPi; }

KernelIntegral kernel_integral() {
  std::vector<double> breaks;
  for (int k = 1; k < static_cast<int>(kCutoff); ++k) breaks.push_back(k);
  const auto half =
      numerics::integrate_piecewise(f_aa, 0.0, kCutoff, breaks, {.rel_tol = 1e-12, .abs_tol = 0.0});
  KernelIntegral out;
  out.value = 2.0 * half.value;
  out.error_estimate = 2.0 * half.error;
  out.tail_bound = tail_bound(kCutoff);
  detail::require(out.tail_bound < 1e-8 * out.value, ErrorCode::kNumeric,
                  "kernel tail remainder is not negligible");
  return out;
}

double accel_transfer_prefactor(const DerivedModel& model, const ExperimentParams& params) {
  const double c = axis_projection(params.theta0);
  const double hbar = params.constants.hbar;
  const double w0 = model.omega0;
  const double forces = model.ctilde_right * model.ctilde_right + model.ctilde_left * model.ctilde_left;
  return 4.0 * c * c / (hbar * hbar * std::pow(w0, 6)) * forces;
}

double tilt_transfer_prefactor(const DerivedModel& model, const ExperimentParams& params) {
  const double w0 = model.omega0;
  const double spin_force = 4.0 * params.constants.gamma_e * params.eta0;
  const double lever = params.accel * std::sin(params.theta0) / (w0 * w0 * w0);
  return spin_force * spin_force * lever * lever;
}

double transfer_accel(double omega, const DerivedModel& model, const ExperimentParams& params) {
  return accel_transfer_prefactor(model, params) * f_aa(omega / model.omega0);
}

double transfer_tilt(double omega, const DerivedModel& model, const ExperimentParams& params) {
  return tilt_transfer_prefactor(model, params) * f_aa(omega / model.omega0);
}

}  // namespace sgdephase::kernel
