#pragma once

// Frequency response of the one-loop trajectory.
//
// Every first-order phase fluctuation in this model has the form
//   delta_phi = K * Integral_0^tau noise(t) (cos(w0 t) - 1) dt,
// so its variance is K^2 Integral S(w) |W(w)|^2 dw with the window
//   W(w) = Integral_0^tau (cos(w0 t) - 1) e^{i w t} dt,
//   |W(w0 xi)|^2 = (4 / w0^2) f_aa(xi),
//   f_aa(xi) = sin^2(pi xi) / (xi^2 (xi^2 - 1)^2).

#include "sgdephase/model.hpp"

namespace sgdephase::kernel {

/// Normalised acceleration kernel. Total: the removable singularities at
/// xi = 0 and xi = +-1 evaluate to pi^2 and pi^2/4.
double f_aa(double xi);

/// |W(omega)|^2 in s^2.
double window_sq(double omega, double omega0);

/// Upper bound of Integral_{|xi| > xi_cut} f_aa, valid for xi_cut >= 2.
double tail_bound(double xi_cut);

struct KernelIntegral {
  double value = 0.0;           // Integral_{-xi_cut}^{xi_cut} f_aa
  double error_estimate = 0.0;  // quadrature estimate
  double tail_bound = 0.0;      // bound on the truncated remainder
};

/// Integral of f_aa over the real line (= 3 pi^2 / 2), by adaptive quadrature
/// on |xi| <= 50 with the remainder bounded analytically.
KernelIntegral kernel_integral();

/// Exact value 3 pi^2 / 2, for callers that want the closed form.
double kernel_integral_exact();

/// |F_a,eff(omega)|^2 for acceleration noise, s^2 * (force / hbar)^2 / w0^4 units.
double transfer_accel(double omega, const DerivedModel& model, const ExperimentParams& params);

/// |F_theta,eff(omega)|^2 for tilt-angle noise.
double transfer_tilt(double omega, const DerivedModel& model, const ExperimentParams& params);

/// Xi-independent prefactors of the two transfer functions: transfer(w0 xi) =
/// prefactor * f_aa(xi).
double accel_transfer_prefactor(const DerivedModel& model, const ExperimentParams& params);
double tilt_transfer_prefactor(const DerivedModel& model, const ExperimentParams& params);

}  // namespace sgdephase::kernel
