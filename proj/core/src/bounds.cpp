#include "sgdephase/bounds.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "sgdephase/errors.hpp"
#include "sgdephase/numerics.hpp"

namespace sgdephase::bounds {

using detail::require;

namespace {

double spin_force(const ExperimentParams& params) {
  return params.constants.hbar * params.constants.gamma_e * params.eta0;
}

// (C~_R^2 + C~_L^2) in units of the spin force squared.
double normalised_forces(const ExperimentParams& params) {
  const DerivedModel model = derive(params);
  const double h = spin_force(params);
  const double r = model.ctilde_right / h;
  const double l = model.ctilde_left / h;
  return r * r + l * l;
}

}  // namespace

BoundResult psd_bound(const DerivedModel& model, const ExperimentParams& params, Channel channel,
                      double gamma_tau_target) {
  require(std::isfinite(gamma_tau_target) && gamma_tau_target > 0.0,
          ErrorCode::kInvalidParameter, "gamma * tau target must be positive");
  BoundResult out;
  out.channel = channel;
  out.gamma_tau_target = gamma_tau_target;
  out.params = params;
  const double coefficient = dephasing::white_rate_coefficient(model, params, channel);
  if (coefficient > 0.0) {
    out.sqrt_psd_bound = std::sqrt(gamma_tau_target / (model.tau * coefficient));
  }
  return out;
}

double find_a_min(const ExperimentParams& params) {
  params.validate();
  const double c = axis_projection(params.theta0);
  require(c > 0.0, ErrorCode::kDomain, "no finite a_m when the acceleration is perpendicular");
  return diamagnetic_force(params) / (params.mass * c);
}

double find_a_min_numeric(const ExperimentParams& params) {
  params.validate();
  require(axis_projection(params.theta0) > 0.0, ErrorCode::kDomain,
          "no finite a_m when the acceleration is perpendicular");
  const auto objective = [&params](double a) {
    ExperimentParams p = params;
    p.accel = a;
    return normalised_forces(p);
  };
  // The objective is convex in a; grow the bracket until it turns upward.
  double hi = 1.0;
  for (int i = 0; i < 200 && objective(hi) <= objective(0.5 * hi); ++i) hi *= 2.0;
  const auto result = numerics::golden_section_minimize(objective, 0.0, hi, hi * 1e-13);
  return result.x;
}

std::optional<double> cancellation_angle(const ExperimentParams& params) {
  const double ratio = diamagnetic_force(params) / (params.mass * params.accel);
  if (!(params.accel > 0.0) || !(ratio > 0.0) || ratio >= 1.0) return std::nullopt;
  return std::acos(ratio);
}

ThetaMin find_theta_min(const ExperimentParams& params) {
  params.validate();
  if (!(params.accel * params.mass > diamagnetic_force(params))) {
    return {std::numbers::pi / 2, true};
  }

  const auto objective = [&params](double theta) {
    ExperimentParams p = params;
    p.theta0 = theta;
    const double c = axis_projection(theta);
    return c * c * normalised_forces(p);
  };

  // The dip around the cancellation angle is narrow (~1e-3 deg at the default
  // parameters), so scan finely before handing a bracket to Brent.
  const double lo = deg_to_rad(80.0);
  const double hi = std::numbers::pi / 2;
  constexpr std::size_t kScan = 400000;
  const double step = (hi - lo) / static_cast<double>(kScan);
  double prev2 = objective(lo);
  double prev1 = objective(lo + step);
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 2; i <= kScan; ++i) {
    const double cur = objective(lo + static_cast<double>(i) * step);
    if (prev1 < prev2 && prev1 <= cur && prev1 < best_value) {
      best_value = prev1;
      best_index = i - 1;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  if (best_index == 0) return {std::numbers::pi / 2, true};

  const double a = lo + static_cast<double>(best_index - 1) * step;
  const double b = lo + static_cast<double>(best_index + 1) * step;
  const auto refined = numerics::brent_minimize(objective, a, b);
  return {refined.x, false};
}

}  // namespace sgdephase::bounds
