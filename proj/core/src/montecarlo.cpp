#include "sgdephase/montecarlo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numbers>

#include "sgdephase/errors.hpp"
#include "sgdephase/parallel.hpp"

namespace sgdephase::montecarlo {

using detail::require;

namespace {

constexpr std::size_t kMinShots = 100;
constexpr std::size_t kMinFullActionSteps = 1000;
constexpr std::size_t kMinLinearSteps = 16;
constexpr double kMaxEnergyDrift = 1e-3;

// Fixed-order pairwise sum; the same input order gives the same bits.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

std::size_t expected_traces(Channel channel) { return channel == Channel::kAccel ? 2 : 1; }

void check_traces(const DerivedModel& model, Channel channel,
                  std::span<const noise::NoiseTrace> traces) {
  require(traces.size() == expected_traces(channel), ErrorCode::kDomain,
          fmt::format("{} channel needs {} noise trace(s), got {}", dephasing::to_string(channel),
                      expected_traces(channel), traces.size()));
  const std::size_t n = traces.front().size();
  require(n > 0, ErrorCode::kDomain, "empty noise trace");
  for (const auto& trace : traces) {
    require(trace.size() == n && trace.dt == traces.front().dt, ErrorCode::kDomain,
            "noise traces must share length and dt");
    const double span = trace.dt * static_cast<double>(trace.size());
    require(std::abs(span - model.tau) <= 1e-9 * model.tau, ErrorCode::kDomain,
            fmt::format("noise trace spans {} s but the loop lasts {} s", span, model.tau));
  }
}

// Midpoint weights (cos(w0 t) - 1) dt of the first-order phase functional.
std::vector<double> window_weights(double omega0, double dt, std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    w[k] = (std::cos(omega0 * t) - 1.0) * dt;
  }
  return w;
}

double weighted_sum(std::span<const double> samples, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) s += samples[k] * weights[k];
  return s;
}

double linear_phase(const DerivedModel& model, const ExperimentParams& params, Channel channel,
                    std::span<const noise::NoiseTrace> traces, std::span<const double> weights) {
  const double w0sq = model.omega0 * model.omega0;
  if (channel == Channel::kAccel) {
    const double k = axis_projection(params.theta0) / (params.constants.hbar * w0sq);
    return k * (model.ctilde_right * weighted_sum(traces[0].samples, weights) -
                model.ctilde_left * weighted_sum(traces[1].samples, weights));
  }
  const double k =
      -2.0 * params.constants.gamma_e * params.eta0 * params.accel * std::sin(params.theta0) / w0sq;
  return k * weighted_sum(traces[0].samples, weights);
}

}  // namespace

std::string_view to_string(McMethod method) {
  return method == McMethod::kLinearResponse ? "linear" : "full-action";
}

void McConfig::validate() const {
  require(n_shots >= kMinShots, ErrorCode::kInvalidParameter,
          fmt::format("n_shots must be at least {}, got {}", kMinShots, n_shots));
  require(steps >= kMinLinearSteps, ErrorCode::kInvalidParameter,
          fmt::format("steps must be at least {}, got {}", kMinLinearSteps, steps));
  require(method != McMethod::kFullAction || steps >= kMinFullActionSteps,
          ErrorCode::kInvalidParameter,
          fmt::format("full-action integration needs dt <= tau/{}, got tau/{}",
                      kMinFullActionSteps, steps));
  require(std::abs(arm_correlation) <= 1.0, ErrorCode::kInvalidParameter,
          "arm correlation must lie in [-1, 1]");
  require(channel == Channel::kAccel || arm_correlation == 0.0, ErrorCode::kInvalidParameter,
          "arm correlation applies to the acceleration channel only");
  if (!psd.is_white()) {
    require(std::has_single_bit(steps) && std::has_single_bit(synthesis_factor),
            ErrorCode::kInvalidParameter,
            "colored noise needs power-of-two steps and synthesis_factor");
  }
}

McEstimate summarize(std::span<const double> phases) {
  const std::size_t n = phases.size();
  require(n >= 3, ErrorCode::kInsufficientData, "need at least 3 shots for a variance");
  const double dn = static_cast<double>(n);
  const double mean = pairwise_sum(phases) / dn;

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (phases[i] - mean) * (phases[i] - mean);
  const double m2 = pairwise_sum(sq);
  const double variance = m2 / (dn - 1.0);

  // Leave-one-out variances: (M2 - n/(n-1) d_i^2) / (n - 2).
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = (m2 - dn / (dn - 1.0) * sq[i]) / (dn - 2.0);
  const double loo_mean = pairwise_sum(loo) / dn;
  for (double& v : loo) v = (v - loo_mean) * (v - loo_mean);

  McEstimate out;
  out.variance = variance;
  out.std_error = std::sqrt((dn - 1.0) / dn * pairwise_sum(loo));
  out.gaussian_stderr = variance * std::sqrt(2.0 / (dn - 1.0));
  out.mean = mean;
  out.std_error_mean = std::sqrt(variance / dn);
  out.n_shots = n;
  return out;
}

double shot_phase_linear(const DerivedModel& model, const ExperimentParams& params,
                         Channel channel, std::span<const noise::NoiseTrace> traces) {
  check_traces(model, channel, traces);
  const auto weights = window_weights(model.omega0, traces.front().dt, traces.front().size());
  return linear_phase(model, params, channel, traces, weights);
}

FullActionIntegrator::FullActionIntegrator(const DerivedModel& model,
                                           const ExperimentParams& params, std::size_t steps)
    : model_(model),
      params_(params),
      steps_(steps),
      dt_(model.tau / static_cast<double>(steps)),
      projection_(axis_projection(params.theta0)) {
  require(steps >= kMinFullActionSteps, ErrorCode::kStepSize,
          fmt::format("full-action integration needs at least {} steps per loop, got {}",
                      kMinFullActionSteps, steps));
  const double m = params.mass;
  const double w0sq = model.omega0 * model.omega0;

  double kinetic_scale = 0.0;
  for (Arm arm : {Arm::kLeft, Arm::kRight}) {
    const double f = model.force(arm);
    kinetic_scale = std::max(kinetic_scale, 0.5 * f * f / (m * w0sq));
  }

  const std::vector<double> quiet(steps, 0.0);
  for (Arm arm : {Arm::kLeft, Arm::kRight}) {
    const double f = model.force(arm);
    auto& x = reference_[static_cast<std::size_t>(arm)];
    x = trajectory(arm, quiet);
    // E = m v^2 / 2 + m w0^2 x^2 / 2 + C~ x, zero at release.
    for (std::size_t k = 1; k < steps; ++k) {
      const double v = (x[k + 1] - x[k - 1]) / (2.0 * dt_);
      const double e = 0.5 * m * v * v + 0.5 * m * w0sq * x[k] * x[k] + f * x[k];
      energy_drift_ = std::max(energy_drift_, std::abs(e) / kinetic_scale);
    }
  }
  require(energy_drift_ <= kMaxEnergyDrift, ErrorCode::kStepSize,
          fmt::format("noiseless energy drift {} exceeds {}; reduce dt", energy_drift_,
                      kMaxEnergyDrift));
}

double FullActionIntegrator::closure_error() const {
  return std::max(std::abs(reference_[0].back()), std::abs(reference_[1].back()));
}

std::span<const double> FullActionIntegrator::reference(Arm arm) const {
  return reference_[static_cast<std::size_t>(arm)];
}

// Discrete Lagrangian for step k, with extra_k the additional acceleration
// along x during the step:
//   L_k = m (x_{k+1} - x_k)^2 / (2 dt) - dt (V_k(x_k) + V_k(x_{k+1})) / 2,
//   V_k(x) = m w0^2 x^2 / 2 + C~ x - m extra_k x.
// Its stationarity conditions give the position update below.
std::vector<double> FullActionIntegrator::trajectory(Arm arm,
                                                     std::span<const double> extra) const {
  const double bias = model_.force(arm) / params_.mass;
  const double w0sq = model_.omega0 * model_.omega0;
  const double h2 = dt_ * dt_;
  std::vector<double> x(steps_ + 1, 0.0);
  x[1] = -0.5 * h2 * (bias - extra[0]);
  for (std::size_t k = 1; k < steps_; ++k) {
    const double drive = 0.5 * (extra[k - 1] + extra[k]);
    x[k + 1] = 2.0 * x[k] - x[k - 1] - h2 * (w0sq * x[k] + bias - drive);
  }
  return x;
}

// Action of the noisy run minus the noiseless one for a single arm.
double FullActionIntegrator::arm_action_delta(Arm arm, std::span<const double> extra) const {
  const auto& r = reference_[static_cast<std::size_t>(arm)];
  const double m = params_.mass;
  const double f = model_.force(arm);
  const double w0sq = model_.omega0 * model_.omega0;
  const std::size_t n = steps_;
  const std::vector<double> x = trajectory(arm, extra);

  // Expanded in d = x - r so nothing cancels against the deterministic action.
  const auto potential_delta = [&](std::size_t i, double e) {
    const double d = x[i] - r[i];
    return (m * w0sq * r[i] + f) * d + 0.5 * m * w0sq * d * d - m * e * x[i];
  };
  double action = 0.0;
  double d_prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d_next = x[k + 1] - r[k + 1];
    const double dr = r[k + 1] - r[k];
    const double dd = d_next - d_prev;
    const double kinetic = 0.5 * m / dt_ * (2.0 * dr * dd + dd * dd);
    const double potential = 0.5 * dt_ * (potential_delta(k, extra[k]) +
                                          potential_delta(k + 1, extra[k]));
    action += kinetic - potential;
    d_prev = d_next;
  }
  return action;
}

double FullActionIntegrator::phase(Channel channel,
                                   std::span<const noise::NoiseTrace> traces) const {
  check_traces(model_, channel, traces);
  require(traces.front().size() == steps_, ErrorCode::kDomain,
          fmt::format("noise trace has {} samples, integrator uses {}", traces.front().size(),
                      steps_));
  std::vector<double> right(steps_);
  std::vector<double> left(steps_);
  if (channel == Channel::kAccel) {
    for (std::size_t k = 0; k < steps_; ++k) {
      right[k] = traces[0].samples[k] * projection_;
      left[k] = traces[1].samples[k] * projection_;
    }
  } else {
    // a cos(theta + dtheta) - a cos(theta), written without cancellation.
    const double a = params_.accel;
    const double theta = params_.theta0;
    for (std::size_t k = 0; k < steps_; ++k) {
      const double dth = traces[0].samples[k];
      right[k] = -2.0 * a * std::sin(theta + 0.5 * dth) * std::sin(0.5 * dth);
    }
    left = right;
  }
  return (arm_action_delta(Arm::kRight, right) - arm_action_delta(Arm::kLeft, left)) /
         params_.constants.hbar;
}

double FullActionIntegrator::noiseless_residual(Channel channel) const {
  const noise::NoiseTrace zero{dt_, std::vector<double>(steps_, 0.0), 0};
  const std::vector<noise::NoiseTrace> traces(expected_traces(channel), zero);
  return phase(channel, traces);
}

double shot_phase_full_action(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel, std::span<const noise::NoiseTrace> traces) {
  check_traces(model, channel, traces);
  const FullActionIntegrator integrator(model, params, traces.front().size());
  return integrator.phase(channel, traces);
}

McEstimate mc_variance(const McConfig& config, const DerivedModel& model,
                       const ExperimentParams& params) {
  config.validate();
  const std::size_t steps = config.steps;
  const double dt = model.tau / static_cast<double>(steps);
  const bool full = config.method == McMethod::kFullAction;
  const bool accel = config.channel == Channel::kAccel;
  const double rho = config.arm_correlation;

  std::unique_ptr<FullActionIntegrator> integrator;
  if (full) integrator = std::make_unique<FullActionIntegrator>(model, params, steps);
  const auto weights = window_weights(model.omega0, dt, steps);

  const auto draw = [&](std::size_t shot, std::uint64_t role) {
    const std::uint64_t stream = 4 * static_cast<std::uint64_t>(shot) + role;
    if (config.psd.is_white()) {
      return noise::synth_white(config.psd.level(), dt, steps, config.seed, stream);
    }
    auto trace =
        noise::synth_colored(config.psd, dt, steps * config.synthesis_factor, config.seed, stream);
    trace.samples.resize(steps);
    return trace;
  };

  std::vector<double> phases(config.n_shots);
  std::vector<double> linear(config.n_shots);
  parallel_for(config.n_shots, [&](std::size_t shot) {
    std::vector<noise::NoiseTrace> traces;
    if (accel) {
      traces.push_back(draw(shot, 0));
      traces.push_back(draw(shot, 1));
      if (rho != 0.0) {
        const auto shared = draw(shot, 2);
        const double own = std::sqrt(1.0 - std::abs(rho));
        const double common = std::sqrt(std::abs(rho));
        const double sign = rho > 0.0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < steps; ++k) {
          traces[0].samples[k] = own * traces[0].samples[k] + common * shared.samples[k];
          traces[1].samples[k] = own * traces[1].samples[k] + sign * common * shared.samples[k];
        }
      }
    } else {
      traces.push_back(draw(shot, 0));
    }
    linear[shot] = linear_phase(model, params, config.channel, traces, weights);
    phases[shot] = full ? integrator->phase(config.channel, traces) : linear[shot];
  });

  McEstimate out = summarize(phases);
  out.method = config.method;
  out.linear_variance = full ? summarize(linear).variance : out.variance;
  out.nonlinear_flag =
      full && std::abs(out.variance - out.linear_variance) > 0.05 * out.linear_variance;
  return out;
}

}  // namespace sgdephase::montecarlo
