#include "sgdephase/model.hpp"

#include <cmath>
#include <string>

#include "sgdephase/errors.hpp"

namespace sgdephase {

using detail::require;

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void PhysConstants::validate() const {
  require(positive_finite(hbar), ErrorCode::kInvalidParameter, "hbar must be positive");
  require(positive_finite(gamma_e), ErrorCode::kInvalidParameter, "gamma_e must be positive");
  require(std::isfinite(chi_rho) && chi_rho < 0.0, ErrorCode::kInvalidParameter,
          "chi_rho must be negative (diamagnetic)");
  require(positive_finite(mu0), ErrorCode::kInvalidParameter, "mu0 must be positive");
}

void ExperimentParams::validate() const {
  constants.validate();
  require(positive_finite(mass), ErrorCode::kInvalidParameter, "mass must be positive");
  require(positive_finite(eta0), ErrorCode::kInvalidParameter, "eta0 must be positive");
  require(std::isfinite(b0), ErrorCode::kInvalidParameter, "b0 must be finite");
  require(std::isfinite(accel) && accel >= 0.0, ErrorCode::kInvalidParameter,
          "accel must be non-negative");
  require(std::isfinite(theta0) && theta0 >= 0.0 && theta0 <= std::numbers::pi / 2,
          ErrorCode::kInvalidParameter, "theta0 must lie in [0, pi/2]");
  require(std::isfinite(zfs_d), ErrorCode::kInvalidParameter, "zfs_d must be finite");
}

double axis_projection(double theta) { return std::sin(std::numbers::pi / 2 - theta); }

double diamagnetic_force(const ExperimentParams& params) {
  const auto& k = params.constants;
  return (-k.chi_rho * params.mass / k.mu0) * params.b0 * params.eta0;
}

DerivedModel derive(const ExperimentParams& params) {
  params.validate();
  const auto& k = params.constants;

  DerivedModel model;
  model.omega0 = std::sqrt(-k.chi_rho / k.mu0) * params.eta0;
  model.tau = 2.0 * std::numbers::pi / model.omega0;

  const double spin_term = k.hbar * k.gamma_e;
  const double diamagnetic = -(k.chi_rho * params.mass / k.mu0) * params.b0;
  model.c_right = spin(Arm::kRight) * spin_term + diamagnetic;
  model.c_left = spin(Arm::kLeft) * spin_term + diamagnetic;

  const double inertial = params.mass * params.accel * axis_projection(params.theta0);
  model.ctilde_right = model.c_right * params.eta0 - inertial;
  model.ctilde_left = model.c_left * params.eta0 - inertial;

  model.dx_max =
      4.0 * spin_term * params.eta0 / (params.mass * model.omega0 * model.omega0);

  for (double v : {model.omega0, model.tau, model.c_right, model.c_left, model.ctilde_right,
                   model.ctilde_left, model.dx_max}) {
    require(std::isfinite(v), ErrorCode::kInvalidParameter,
            "derived quantity is not finite (overflow/underflow)");
  }
  require(model.omega0 > 0.0 && model.dx_max > 0.0, ErrorCode::kInvalidParameter,
          "derived frequency or superposition size underflowed to zero");
  return model;
}

double trajectory(const DerivedModel& model, double mass, Arm arm, double t) {
  require(t >= 0.0 && t <= model.tau, ErrorCode::kDomain,
          "trajectory time must lie in [0, tau]");
  const double w0 = model.omega0;
  return model.force(arm) / (mass * w0 * w0) * (std::cos(w0 * t) - 1.0);
}

std::vector<SuperpositionRow> superposition_vs_mass(const ExperimentParams& params,
                                                    std::span<const double> masses) {
  std::vector<SuperpositionRow> rows;
  rows.reserve(masses.size());
  for (double m : masses) {
    ExperimentParams p = params;
    p.mass = m;
    rows.push_back({m, derive(p).dx_max});
  }
  return rows;
}

}  // namespace sgdephase
