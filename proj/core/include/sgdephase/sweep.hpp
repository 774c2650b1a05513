#pragma once

// Grid evaluation over one or two parameters, with contour extraction.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgdephase/model.hpp"

namespace sgdephase::sweep {

enum class Scale { kLinear, kLog };

/// Sweepable parameter names: mass_kg, eta0_t_per_m, b0_t, accel_m_s2,
/// theta0_deg, sqrt_s_aa_raw, sqrt_s_tt_raw, xi.
bool is_parameter(std::string_view name);

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t n = 2;
  Scale scale = Scale::kLinear;

  /// n >= 2, min < max, log scale needs min > 0, name must be a parameter.
  void validate() const;
  std::vector<double> values() const;
};

enum class Quantity { kGammaAccel, kGammaTilt, kBoundAccel, kBoundTilt, kDxMax, kKernel };

std::string_view to_string(Quantity quantity);
Quantity parse_quantity(std::string_view name);
/// CSV column for the quantity, with unit suffix (gamma_tau, sqrt_s_aa_bound_raw, ...).
std::string_view column_name(Quantity quantity);

struct SweepSpec {
  Axis x;
  std::optional<Axis> y;
  Quantity quantity = Quantity::kGammaAccel;
  /// Parameter overrides applied before the axes (same names as Axis::name).
  std::map<std::string, double> fixed;
  std::vector<double> contour_levels;
  double gamma_tau_target = 1.0;  // bound quantities

  /// Axes valid and distinct, names known, xi only with Kernel and Kernel only
  /// with xi. Throws ErrorCode::kSpec.
  void validate() const;
};

/// Single-cell evaluation; empty for the unbounded sentinel.
std::optional<double> evaluate_point(const SweepSpec& spec, const ExperimentParams& base,
                                     double x, std::optional<double> y = std::nullopt);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Polyline = std::vector<Point>;

struct Contour {
  double level = 0.0;
  std::vector<Polyline> lines;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<double> xs;
  std::vector<double> ys;  // empty for 1-D sweeps
  /// Row-major over (y, x): values[iy * xs.size() + ix].
  std::vector<std::optional<double>> values;
  std::vector<Contour> contours;

  const std::optional<double>& at(std::size_t ix, std::size_t iy = 0) const {
    return values[iy * xs.size() + ix];
  }
};

/// Evaluates every cell in parallel; output order is fixed by the grid.
SweepResult run_sweep(const SweepSpec& spec, const ExperimentParams& base);

/// Marching-squares iso-lines of a 2-D grid, chained into polylines. Cells with
/// a sentinel corner are skipped. Interpolation is done in log space along log
/// axes, and in log value on edges where both ends and the level are positive.
Contour extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<std::optional<double>>& values, double level,
                        Scale x_scale = Scale::kLinear, Scale y_scale = Scale::kLinear);

/// Contour vertex with the largest y among those with x in [x_lo, x_hi].
std::optional<Point> contour_max_y(const Contour& contour, double x_lo, double x_hi);

/// Grid CSV: header `<x>[,<y>],<column>`, one row per cell in storage order,
/// empty field for the sentinel.
void write_grid_csv(std::ostream& out, const SweepResult& result);
/// Contour CSV: `level,segment_id,x,y`, one row per polyline vertex.
void write_contour_csv(std::ostream& out, const SweepResult& result);

}  // namespace sgdephase::sweep
