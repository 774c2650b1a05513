#include "sgdephase/numerics.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <queue>
#include <vector>

#include "sgdephase/errors.hpp"

namespace sgdephase::numerics {

namespace {

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss rule
// living on the odd indices.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = kKronrodWeights[7] * f_center;
  double gauss = kGaussWeights[3] * f_center;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  if (a == b) return {};
  std::priority_queue<Panel> panels;
  panels.push(gauss_kronrod_15(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;

  const auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };
  std::size_t count = 1;
  while (error > tolerance()) {
    if (count >= options.max_panels) {
      detail::raise(ErrorCode::kNumeric,
                    fmt::format("quadrature on [{}, {}] did not converge: error estimate {} "
                                "exceeds tolerance {} after {} panels",
                                a, b, error, tolerance(), count));
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  for (; !panels.empty(); panels.pop()) {
    value += panels.top().value;
    error += panels.top().error;
  }
  if (!std::isfinite(value)) {
    detail::raise(ErrorCode::kNumeric, fmt::format("quadrature on [{}, {}] produced a non-finite value", a, b));
  }
  return {value, error};
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints,
                                     const QuadratureOptions& options) {
  std::vector<double> nodes{a};
  for (double p : breakpoints) {
    if (p > a && p < b) nodes.push_back(p);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto part = integrate(f, nodes[i], nodes[i + 1], options);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                      double x_tol, std::size_t max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t it = 0;
  for (; it < max_iter && std::abs(b - a) > x_tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

MinimumResult brent_minimize(const std::function<double(double)>& f, double a, double b, int bits,
                             std::size_t max_iter) {
  std::uintmax_t iterations = max_iter;
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, a, b, bits, iterations);
  return {x, fx, static_cast<std::size_t>(iterations)};
}

}  // namespace sgdephase::numerics
