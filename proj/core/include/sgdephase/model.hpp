#pragma once

// Physical parameters and the deterministic one-loop trajectory of a
// Stern-Gerlach interferometer in a harmonic magnetic trap.
//
// The interferometer axis is x. Each arm j in {L, R} carries spin S_xj = -1/+1
// and moves under
//
//   m x_j'' = -m w0^2 x_j - C_j eta0 + m a cos(theta0)
//
// with C_j = S_xj hbar gamma_e - (chi_rho m / mu0) B0 and w0 = sqrt(-chi_rho/mu0) eta0.
// Starting at rest at the origin, both arms close after tau = 2 pi / w0.
//
// All quantities are SI; angles are radians.

#include <numbers>
#include <span>
#include <vector>

namespace sgdephase {

struct PhysConstants {
  double hbar = 1.05e-34;      // J s
  double gamma_e = 1.761e11;   // s^-1 T^-1
  double chi_rho = -6.286e-9;  // m^3 kg^-1, diamagnetic
  double mu0 = 4.0e-7 * std::numbers::pi;  // H m^-1

  void validate() const;
};

struct ExperimentParams {
  PhysConstants constants;
  double mass = 1e-15;           // kg
  double eta0 = 6e3;             // T m^-1
  double b0 = 1e-3;              // T
  double accel = 9.81;           // m s^-2
  double theta0 = std::numbers::pi / 2;  // rad, between x and the acceleration
  // Zero-field splitting. Enters the Lagrangian only as a constant, so it never
  // shows up in a phase difference; kept for completeness of the parameter set.
  double zfs_d = 2.87e9;         // s^-1

  void validate() const;
};

enum class Arm { kLeft, kRight };

/// Spin projection S_x of an arm: +1 for the right arm, -1 for the left.
constexpr double spin(Arm arm) { return arm == Arm::kRight ? 1.0 : -1.0; }

struct DerivedModel {
  double omega0 = 0.0;        // rad s^-1
  double tau = 0.0;           // s
  double c_right = 0.0;       // J T^-1
  double c_left = 0.0;        // J T^-1
  double ctilde_right = 0.0;  // N
  double ctilde_left = 0.0;   // N
  double dx_max = 0.0;        // m

  double coupling(Arm arm) const { return arm == Arm::kRight ? c_right : c_left; }
  double force(Arm arm) const { return arm == Arm::kRight ? ctilde_right : ctilde_left; }
};

DerivedModel derive(const ExperimentParams& params);

/// cos(theta), evaluated as sin(pi/2 - theta) so that theta == pi/2 projects to
/// exactly zero.
double axis_projection(double theta);

/// Spin-independent diamagnetic force magnitude (-chi_rho m / mu0) B0 eta0.
double diamagnetic_force(const ExperimentParams& params);

/// Arm position x_j(t) = C~_j / (m w0^2) (cos(w0 t) - 1) for 0 <= t <= tau.
double trajectory(const DerivedModel& model, double mass, Arm arm, double t);

struct SuperpositionRow {
  double mass = 0.0;
  double dx_max = 0.0;
};

/// Maximum superposition size for each mass, other parameters held fixed.
std::vector<SuperpositionRow> superposition_vs_mass(const ExperimentParams& params,
                                                    std::span<const double> masses);

// Angles cross the file/CLI boundary in degrees. The division happens first so
// that 90 deg maps exactly onto pi/2.
constexpr double deg_to_rad(double deg) { return deg / 180.0 * std::numbers::pi; }
constexpr double rad_to_deg(double rad) { return rad / std::numbers::pi * 180.0; }

}  // namespace sgdephase
