#pragma once

// Tolerable white-noise levels and minimum-sensitivity operating points.

#include <optional>

#include "sgdephase/dephasing.hpp"
#include "sgdephase/model.hpp"

namespace sgdephase::bounds {

using dephasing::Channel;

struct BoundResult {
  Channel channel = Channel::kAccel;
  /// Largest sqrt(S) meeting the target; empty when the channel does not
  /// couple at all (any amplitude is tolerable).
  std::optional<double> sqrt_psd_bound;
  double gamma_tau_target = 1.0;
  ExperimentParams params;

  bool unbounded() const { return !sqrt_psd_bound.has_value(); }
};

/// Inverts the white-noise rate: S = target / (tau * dGamma/dS).
BoundResult psd_bound(const DerivedModel& model, const ExperimentParams& params, Channel channel,
                      double gamma_tau_target = 1.0);

/// Acceleration at which the inertial force cancels the spin-independent
/// magnetic force: a_m = (-chi_rho / mu0) B0 eta0 / cos(theta0). Throws
/// ErrorCode::kDomain when cos(theta0) == 0.
double find_a_min(const ExperimentParams& params);

/// Golden-section minimisation of C~_R^2 + C~_L^2 over the acceleration, with
/// the bracket grown from [0, 1] m/s^2. Independent of find_a_min().
double find_a_min_numeric(const ExperimentParams& params);

struct ThetaMin {
  double theta = 0.0;  // rad
  /// True when no interior minimum is reachable and theta is the pi/2 sentinel.
  bool at_boundary = false;
};

/// Angle where m a cos(theta) equals the magnetic force, if reachable.
std::optional<double> cancellation_angle(const ExperimentParams& params);

/// Local minimum of the acceleration rate cos^2(theta) (C~_R^2 + C~_L^2) on
/// (80 deg, 90 deg), found by a dense scan and refined with Brent. Requires the
/// cancellation to be reachable, a > (-chi_rho / mu0) B0 eta0; otherwise returns
/// the boundary sentinel.
ThetaMin find_theta_min(const ExperimentParams& params);

}  // namespace sgdephase::bounds
