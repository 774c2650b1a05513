#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sgdephase::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::size_t max_panels = 20000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integral of f over [a, b]. The
/// panel with the largest |K15 - G7| is bisected until the summed estimate is
/// below max(abs_tol, rel_tol * |value|).
///
/// Throws ErrorCode::kNumeric when max_panels is reached first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Same as integrate() but splits [a, b] at the given interior breakpoints
/// (points outside (a, b) are ignored). Use this for kinks and near-singular
/// points so no single panel straddles them.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints,
                                     const QuadratureOptions& options = {});

struct MinimumResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b].
MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                      double x_tol, std::size_t max_iter = 500);

/// Brent's parabolic/golden minimiser on [a, b].
MinimumResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                             int bits = 50, std::size_t max_iter = 500);

}  // namespace sgdephase::numerics
