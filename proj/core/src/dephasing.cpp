#include "sgdephase/dephasing.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sgdephase/errors.hpp"
#include "sgdephase/kernel.hpp"
#include "sgdephase/numerics.hpp"

namespace sgdephase::dephasing {

using detail::require;

namespace {

constexpr double kXiCutoff = 50.0;

void require_level(double s) {
  require(std::isfinite(s) && s >= 0.0, ErrorCode::kInvalidParameter,
          "PSD level must be finite and non-negative");
}

}  // namespace

std::string_view to_string(Channel channel) {
  return channel == Channel::kAccel ? "accel" : "tilt";
}

DephasingResult make_result(Channel channel, double phase_variance, double tau) {
  DephasingResult r;
  r.channel = channel;
  r.phase_variance = phase_variance;
  r.gamma = phase_variance;
  r.gamma_tau = phase_variance * tau;
  r.coherence = coherence(r.gamma_tau);
  return r;
}

double colored_rate_prefactor(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel) {
  // Integral dw |F(w)|^2 S(w) = w0 Integral dxi |F(w0 xi)|^2 S(w0 xi).
  const double transfer = channel == Channel::kAccel
                              ? kernel::accel_transfer_prefactor(model, params)
                              : kernel::tilt_transfer_prefactor(model, params);
  return model.omega0 * transfer;
}

double white_rate_coefficient(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel) {
  return colored_rate_prefactor(model, params, channel) * kernel::kernel_integral_exact();
}

DephasingResult gamma_accel_white(const DerivedModel& model, const ExperimentParams& params,
                                  double s_aa) {
  require_level(s_aa);
  return make_result(Channel::kAccel, white_rate_coefficient(model, params, Channel::kAccel) * s_aa,
                     model.tau);
}

DephasingResult gamma_tilt_white(const DerivedModel& model, const ExperimentParams& params,
                                 double s_tt) {
  require_level(s_tt);
  return make_result(Channel::kTilt, white_rate_coefficient(model, params, Channel::kTilt) * s_tt,
                     model.tau);
}

DephasingResult gamma_colored(const DerivedModel& model, const ExperimentParams& params,
                              Channel channel, const noise::PsdSpec& psd) {
  const double w0 = model.omega0;
  double upper = kXiCutoff;
  std::vector<double> breaks;
  for (int k = 1; k < static_cast<int>(kXiCutoff); ++k) breaks.push_back(k);
  if (!psd.is_white()) {
    upper = std::min(upper, psd.omega().back() / w0);
    for (double w : psd.omega()) breaks.push_back(w / w0);
  }

  const auto integrand = [&](double xi) { return psd(w0 * xi) * kernel::f_aa(xi); };
  // Absolute floor: a vanishing spectrum must not demand relative accuracy.
  const double floor = 1e-14 * psd.max_value() * kernel::kernel_integral_exact();
  const auto half = numerics::integrate_piecewise(integrand, 0.0, upper, breaks,
                                                  {.rel_tol = 1e-10, .abs_tol = floor});
  const double weighted = 2.0 * half.value;
  return make_result(channel, colored_rate_prefactor(model, params, channel) * weighted, model.tau);
}

double near_perp_taylor_rate(const DerivedModel& model, const ExperimentParams& params,
                             double s_aa, double dev) {
  const double hbar = params.constants.hbar;
  const double fr = model.c_right * params.eta0;
  const double fl = model.c_left * params.eta0;
  return 4.0 * dev * dev / (hbar * hbar * std::pow(model.omega0, 5)) * (fr * fr + fl * fl) *
         kernel::kernel_integral_exact() * s_aa;
}

DephasingResult gamma_accel_near_perp(const DerivedModel& model, const ExperimentParams& params,
                                      double s_aa, double dev) {
  require_level(s_aa);
  require(dev >= 0.0 && dev <= 0.01, ErrorCode::kApproximationDomain,
          fmt::format("near-perpendicular form needs 0 <= dev <= 0.01 rad, got {}", dev));
  const double magnetic = diamagnetic_force(params);
  const double inertial = params.mass * params.accel * dev;
  require(magnetic > 3.0 * inertial, ErrorCode::kApproximationDomain,
          fmt::format("near-perpendicular form needs the magnetic force {} N to exceed 3 m a dev "
                      "= {} N",
                      magnetic, 3.0 * inertial));
  return make_result(Channel::kAccel, near_perp_taylor_rate(model, params, s_aa, dev), model.tau);
}

double coherence(double gamma_tau) {
  require(gamma_tau >= 0.0, ErrorCode::kInvalidParameter, "gamma * tau must be non-negative");
  return std::exp(-gamma_tau);
}

double mean_decoherence_time(double gamma) {
  require(gamma >= 0.0, ErrorCode::kInvalidParameter, "gamma must be non-negative");
  if (gamma == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / gamma;
}

double combine_rates(std::span<const double> rates) {
  double sum = 0.0;
  for (double g : rates) {
    require(g >= 0.0, ErrorCode::kInvalidParameter, "rates must be non-negative");
    sum += g * g;
  }
  return std::sqrt(sum);
}

}  // namespace sgdephase::dephasing
