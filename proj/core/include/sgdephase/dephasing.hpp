#pragma once

// Analytic dephasing of the one-loop interferometer.
//
// The rate reported here is the per-shot phase variance, Gamma = E[dphi^2],
// and the coherence target is Gamma * tau <= 1 with CM = exp(-Gamma tau).

#include <span>
#include <string_view>

#include "sgdephase/model.hpp"
#include "sgdephase/noise.hpp"

namespace sgdephase::dephasing {

enum class Channel { kAccel, kTilt };

std::string_view to_string(Channel channel);

struct DephasingResult {
  Channel channel = Channel::kAccel;
  double phase_variance = 0.0;  // rad^2
  double gamma = 0.0;           // same number as phase_variance
  double gamma_tau = 0.0;
  double coherence = 1.0;
};

/// Wraps a phase variance into a result for a loop of duration tau.
DephasingResult make_result(Channel channel, double phase_variance, double tau);

/// d Gamma / d S for a white spectrum: Gamma = coefficient * S.
///   accel: 4 cos^2(theta0) / (hbar^2 w0^5) (C~_R^2 + C~_L^2) (3 pi^2 / 2)
///   tilt:  (2 gamma_e eta0 a sin(theta0) / w0^2)^2 (4 / w0) (3 pi^2 / 2)
double white_rate_coefficient(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel);

/// Channel prefactor P with Gamma = P * Integral S(w0 xi) f_aa(xi) dxi.
double colored_rate_prefactor(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel);

DephasingResult gamma_accel_white(const DerivedModel& model, const ExperimentParams& params,
                                  double s_aa);
DephasingResult gamma_tilt_white(const DerivedModel& model, const ExperimentParams& params,
                                 double s_tt);

/// Rate for an arbitrary spectrum, by adaptive quadrature of S(w0 xi) f_aa(xi)
/// over |xi| <= 50 (split at 1 and at every grid point). Quadrature failure
/// raises ErrorCode::kNumeric.
DephasingResult gamma_colored(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel, const noise::PsdSpec& psd);

/// Near-perpendicular approximation of the acceleration rate with
/// dev = pi/2 - theta0: cos -> dev and the inertial force dropped.
///
/// Requires 0 <= dev <= 0.01 and a magnetic force that dominates,
/// (-chi_rho m / mu0) B0 eta0 > 3 m a dev; otherwise throws
/// ErrorCode::kApproximationDomain.
DephasingResult gamma_accel_near_perp(const DerivedModel& model, const ExperimentParams& params,
                                      double s_aa, double dev);

/// The same Taylor form without any domain check, for measuring where it
/// breaks down.
double near_perp_taylor_rate(const DerivedModel& model, const ExperimentParams& params,
                             double s_aa, double dev);

double coherence(double gamma_tau);

/// 1 / gamma; +infinity when gamma == 0.
double mean_decoherence_time(double gamma);

/// Upper bound on the total rate from independent sources: sqrt(sum Gamma_i^2).
double combine_rates(std::span<const double> rates);

}  // namespace sgdephase::dephasing
