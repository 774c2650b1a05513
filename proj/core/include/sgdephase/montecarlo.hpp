#pragma once

// Monte Carlo phase statistics under synthesized noise.
//
// Two independent routes to the per-shot phase:
//  * linear response: the first-order phase functional evaluated on the noise
//    samples directly;
//  * full action: the noisy equations of motion integrated per arm and the
//    Lagrangian action difference to the noiseless run accumulated along the
//    way.
//
// Noise samples are piecewise constant over each step of dt = tau / steps,
// sample k covering [k dt, (k + 1) dt).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sgdephase/dephasing.hpp"
#include "sgdephase/model.hpp"
#include "sgdephase/noise.hpp"

namespace sgdephase::montecarlo {

using dephasing::Channel;

enum class McMethod { kLinearResponse, kFullAction };

std::string_view to_string(McMethod method);

struct McConfig {
  std::size_t n_shots = 10000;
  std::size_t steps = std::size_t{1} << 14;  // per loop; dt = tau / steps
  std::uint64_t seed = 1;
  Channel channel = Channel::kAccel;
  noise::PsdSpec psd = noise::PsdSpec::white(0.0);
  McMethod method = McMethod::kLinearResponse;
  /// Correlation between the two arms' acceleration noise, in [-1, 1]. The arms
  /// share a fraction |rho| of their noise power (sign flipped on the left arm
  /// for rho < 0). Acceleration channel only.
  double arm_correlation = 0.0;
  /// Colored spectra are synthesized over this many loops and the first loop
  /// is used, so the spectral resolution is finer than w0.
  std::size_t synthesis_factor = 32;

  /// n_shots >= 100; FullAction needs steps >= 1000 (dt <= tau / 1000);
  /// colored spectra need a power-of-two steps.
  void validate() const;
};

struct McEstimate {
  double variance = 0.0;         // rad^2, unbiased sample variance
  double std_error = 0.0;        // jackknife standard error of the variance
  double gaussian_stderr = 0.0;  // variance * sqrt(2 / (n - 1))
  double mean = 0.0;             // rad
  double std_error_mean = 0.0;
  std::size_t n_shots = 0;
  McMethod method = McMethod::kLinearResponse;
  /// FullAction only: linear-response variance on the same noise draws, and
  /// whether the two differ by more than 5%.
  double linear_variance = 0.0;
  bool nonlinear_flag = false;
};

/// Variance, jackknife error and mean of a sample (index order, deterministic).
McEstimate summarize(std::span<const double> phases);

/// First-order phase. Acceleration takes two traces {right arm, left arm};
/// tilt takes one. Each trace must span exactly one loop.
double shot_phase_linear(const DerivedModel& model, const ExperimentParams& params,
                         Channel channel, std::span<const noise::NoiseTrace> traces);

/// Variational (discrete Lagrangian) integrator for both arms. The noiseless
/// reference trajectories are computed once on construction.
class FullActionIntegrator {
 public:
  /// Throws ErrorCode::kStepSize when the noiseless run drifts in energy by more
  /// than 1e-3 of the peak kinetic energy.
  FullActionIntegrator(const DerivedModel& model, const ExperimentParams& params,
                       std::size_t steps);

  std::size_t steps() const { return steps_; }
  double dt() const { return dt_; }

  /// max_j |x_j(tau)| of the noiseless run.
  double closure_error() const;
  /// Largest energy excursion of the noiseless run relative to its peak kinetic
  /// energy.
  double energy_drift() const { return energy_drift_; }
  std::span<const double> reference(Arm arm) const;

  /// Phase difference phi_R - phi_L relative to the noiseless run. Traces as for
  /// shot_phase_linear().
  double phase(Channel channel, std::span<const noise::NoiseTrace> traces) const;

  /// Phase with all-zero noise.
  double noiseless_residual(Channel channel) const;

 private:
  // Positions x_0..x_steps from rest at the origin.
  std::vector<double> trajectory(Arm arm, std::span<const double> extra_accel) const;
  double arm_action_delta(Arm arm, std::span<const double> extra_accel) const;

  DerivedModel model_;
  ExperimentParams params_;
  std::size_t steps_ = 0;
  double dt_ = 0.0;
  double projection_ = 0.0;
  std::array<std::vector<double>, 2> reference_;
  double energy_drift_ = 0.0;
};

double shot_phase_full_action(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel, std::span<const noise::NoiseTrace> traces);

/// Ensemble over config.n_shots shots. Shot i draws its noise from streams keyed
/// by (seed, i, role), and results are reduced in shot order, so the estimate
/// is bit-identical for any worker count.
McEstimate mc_variance(const McConfig& config, const DerivedModel& model,
                       const ExperimentParams& params);

}  // namespace sgdephase::montecarlo
