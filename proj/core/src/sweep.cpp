#include "sgdephase/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "sgdephase/bounds.hpp"
#include "sgdephase/dephasing.hpp"
#include "sgdephase/errors.hpp"
#include "sgdephase/kernel.hpp"
#include "sgdephase/parallel.hpp"

namespace sgdephase::sweep {

using detail::raise;
using detail::require;

namespace {

constexpr std::array<std::string_view, 8> kParameters = {
    "mass_kg",    "eta0_t_per_m",  "b0_t",          "accel_m_s2",
    "theta0_deg", "sqrt_s_aa_raw", "sqrt_s_tt_raw", "xi"};

struct Cell {
  ExperimentParams params;
  double sqrt_s_aa = 0.0;
  double sqrt_s_tt = 0.0;
  double xi = 0.0;

  void set(const std::string& name, double v) {
    if (name == "mass_kg") {
      params.mass = v;
    } else if (name == "eta0_t_per_m") {
      params.eta0 = v;
    } else if (name == "b0_t") {
      params.b0 = v;
    } else if (name == "accel_m_s2") {
      params.accel = v;
    } else if (name == "theta0_deg") {
      params.theta0 = deg_to_rad(v);
    } else if (name == "sqrt_s_aa_raw") {
      sqrt_s_aa = v;
    } else if (name == "sqrt_s_tt_raw") {
      sqrt_s_tt = v;
    } else if (name == "xi") {
      xi = v;
    } else {
      raise(ErrorCode::kSpec, fmt::format("unknown sweep parameter '{}'", name));
    }
  }
};

double to_axis(double v, Scale scale) { return scale == Scale::kLog ? std::log(v) : v; }
double from_axis(double u, Scale scale) { return scale == Scale::kLog ? std::exp(u) : u; }

}  // namespace

bool is_parameter(std::string_view name) {
  return std::find(kParameters.begin(), kParameters.end(), name) != kParameters.end();
}

void Axis::validate() const {
  require(is_parameter(name), ErrorCode::kSpec, fmt::format("unknown sweep parameter '{}'", name));
  require(n >= 2, ErrorCode::kSpec, fmt::format("axis '{}' needs n >= 2", name));
  require(std::isfinite(min) && std::isfinite(max) && min < max, ErrorCode::kSpec,
          fmt::format("axis '{}' needs min < max", name));
  require(scale == Scale::kLinear || min > 0.0, ErrorCode::kSpec,
          fmt::format("log axis '{}' needs min > 0", name));
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(n);
  const double last = static_cast<double>(n - 1);
  const double lo = to_axis(min, scale);
  const double hi = to_axis(max, scale);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = from_axis(lo + (hi - lo) * (static_cast<double>(i) / last), scale);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

std::string_view to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::kGammaAccel: return "gamma_accel";
    case Quantity::kGammaTilt: return "gamma_tilt";
    case Quantity::kBoundAccel: return "bound_accel";
    case Quantity::kBoundTilt: return "bound_tilt";
    case Quantity::kDxMax: return "dx_max";
    case Quantity::kKernel: return "kernel";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::kGammaAccel, Quantity::kGammaTilt, Quantity::kBoundAccel,
                     Quantity::kBoundTilt, Quantity::kDxMax, Quantity::kKernel}) {
    if (to_string(q) == name) return q;
  }
  raise(ErrorCode::kSpec, fmt::format("unknown sweep quantity '{}'", name));
}

std::string_view column_name(Quantity quantity) {
  switch (quantity) {
    case Quantity::kGammaAccel:
    case Quantity::kGammaTilt: return "gamma_tau";
    case Quantity::kBoundAccel: return "sqrt_s_aa_bound_raw";
    case Quantity::kBoundTilt: return "sqrt_s_tt_bound_raw";
    case Quantity::kDxMax: return "dx_max_m";
    case Quantity::kKernel: return "f_aa";
  }
  return "value";
}

void SweepSpec::validate() const {
  x.validate();
  if (y) {
    y->validate();
    require(y->name != x.name, ErrorCode::kSpec, "sweep axes must differ");
  }
  for (const auto& [name, value] : fixed) {
    require(is_parameter(name), ErrorCode::kSpec, fmt::format("unknown sweep parameter '{}'", name));
    require(std::isfinite(value), ErrorCode::kSpec, fmt::format("'{}' must be finite", name));
  }
  const bool kernel = quantity == Quantity::kKernel;
  const auto uses_xi = [](const Axis& a) { return a.name == "xi"; };
  require(!kernel || (uses_xi(x) && !y), ErrorCode::kSpec,
          "the kernel quantity is a 1-D sweep over xi");
  require(kernel || (!uses_xi(x) && !(y && uses_xi(*y))), ErrorCode::kSpec,
          "xi is only meaningful for the kernel quantity");
  for (double level : contour_levels) {
    require(std::isfinite(level), ErrorCode::kSpec, "contour levels must be finite");
  }
  require(contour_levels.empty() || y.has_value(), ErrorCode::kSpec,
          "contours need a 2-D sweep");
}

std::optional<double> evaluate_point(const SweepSpec& spec, const ExperimentParams& base,
                                     double x, std::optional<double> y) {
  Cell cell{base};
  for (const auto& [name, value] : spec.fixed) cell.set(name, value);
  cell.set(spec.x.name, x);
  if (spec.y) {
    require(y.has_value(), ErrorCode::kSpec, "2-D sweep point needs a y value");
    cell.set(spec.y->name, *y);
  }
  require(cell.sqrt_s_aa >= 0.0 && cell.sqrt_s_tt >= 0.0, ErrorCode::kInvalidParameter,
          "amplitude spectral densities must be non-negative");

  if (spec.quantity == Quantity::kKernel) return kernel::f_aa(cell.xi);
  const DerivedModel model = derive(cell.params);
  switch (spec.quantity) {
    case Quantity::kGammaAccel:
      return dephasing::gamma_accel_white(model, cell.params, cell.sqrt_s_aa * cell.sqrt_s_aa)
          .gamma_tau;
    case Quantity::kGammaTilt:
      return dephasing::gamma_tilt_white(model, cell.params, cell.sqrt_s_tt * cell.sqrt_s_tt)
          .gamma_tau;
    case Quantity::kBoundAccel:
      return bounds::psd_bound(model, cell.params, dephasing::Channel::kAccel,
                               spec.gamma_tau_target)
          .sqrt_psd_bound;
    case Quantity::kBoundTilt:
      return bounds::psd_bound(model, cell.params, dephasing::Channel::kTilt,
                               spec.gamma_tau_target)
          .sqrt_psd_bound;
    case Quantity::kDxMax: return model.dx_max;
    case Quantity::kKernel: break;
  }
  return std::nullopt;
}

SweepResult run_sweep(const SweepSpec& spec, const ExperimentParams& base) {
  spec.validate();
  SweepResult out;
  out.spec = spec;
  out.xs = spec.x.values();
  if (spec.y) out.ys = spec.y->values();
  const std::size_t nx = out.xs.size();
  const std::size_t ny = spec.y ? out.ys.size() : 1;
  out.values.resize(nx * ny);
  parallel_for(nx * ny, [&](std::size_t idx) {
    const std::size_t ix = idx % nx;
    const std::size_t iy = idx / nx;
    out.values[idx] = evaluate_point(spec, base, out.xs[ix],
                                     spec.y ? std::optional<double>(out.ys[iy]) : std::nullopt);
  });
  for (double level : spec.contour_levels) {
    out.contours.push_back(
        extract_contour(out.xs, out.ys, out.values, level, spec.x.scale, spec.y->scale));
  }
  return out;
}

Contour extract_contour(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<std::optional<double>>& values, double level,
                        Scale x_scale, Scale y_scale) {
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  require(nx >= 2 && ny >= 2 && values.size() == nx * ny, ErrorCode::kSpec,
          "contour extraction needs a 2-D grid");
  const auto node = [&](std::size_t i, std::size_t j) -> const std::optional<double>& {
    return values[j * nx + i];
  };

  // Edge ids: horizontal edge from node (i, j) to (i + 1, j) is 2 * (j nx + i),
  // vertical edge from (i, j) to (i, j + 1) is 2 * (j nx + i) + 1.
  const auto edge_point = [&](std::size_t id) {
    const std::size_t base = id / 2;
    const std::size_t i = base % nx;
    const std::size_t j = base / nx;
    const bool vertical = id % 2 == 1;
    const std::size_t i2 = vertical ? i : i + 1;
    const std::size_t j2 = vertical ? j + 1 : j;
    double vp = *node(i, j);
    double vq = *node(i2, j2);
    double lv = level;
    if (vp > 0.0 && vq > 0.0 && level > 0.0) {
      vp = std::log(vp);
      vq = std::log(vq);
      lv = std::log(level);
    }
    const double t = vq == vp ? 0.5 : (lv - vp) / (vq - vp);
    const double ux = to_axis(xs[i], x_scale);
    const double uy = to_axis(ys[j], y_scale);
    const double ux2 = to_axis(xs[i2], x_scale);
    const double uy2 = to_axis(ys[j2], y_scale);
    return Point{from_axis(ux + t * (ux2 - ux), x_scale), from_axis(uy + t * (uy2 - uy), y_scale)};
  };

  struct Segment {
    std::size_t a;
    std::size_t b;
  };
  std::vector<Segment> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const std::array<const std::optional<double>*, 4> c = {&node(i, j), &node(i + 1, j),
                                                             &node(i + 1, j + 1), &node(i, j + 1)};
      if (!(*c[0] && *c[1] && *c[2] && *c[3])) continue;
      std::array<bool, 4> above{};
      for (std::size_t k = 0; k < 4; ++k) above[k] = **c[k] >= level;
      // Cell edges in order: bottom, right, top, left. Edge k joins corners k
      // and k + 1.
      const std::array<std::size_t, 4> edges = {2 * (j * nx + i), 2 * (j * nx + i + 1) + 1,
                                                2 * ((j + 1) * nx + i), 2 * (j * nx + i) + 1};
      std::vector<std::size_t> crossed;
      for (std::size_t k = 0; k < 4; ++k) {
        if (above[k] != above[(k + 1) % 4]) crossed.push_back(k);
      }
      if (crossed.size() == 2) {
        segments.push_back({edges[crossed[0]], edges[crossed[1]]});
      } else if (crossed.size() == 4) {
        // Saddle: cut off the corners whose side differs from the centre's.
        const double centre = 0.25 * (**c[0] + **c[1] + **c[2] + **c[3]);
        const bool centre_above = centre >= level;
        for (std::size_t k = 0; k < 4; ++k) {
          if (above[k] != centre_above) segments.push_back({edges[(k + 3) % 4], edges[k]});
        }
      }
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> at_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    at_edge[segments[s].a].push_back(s);
    at_edge[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  const auto next_unused = [&](std::size_t edge) -> std::optional<std::size_t> {
    for (std::size_t s : at_edge[edge]) {
      if (!used[s]) return s;
    }
    return std::nullopt;
  };

  Contour contour;
  contour.level = level;
  // Open chains first (starting at a dangling end), then closed loops.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      Segment seg = segments[s];
      const bool a_open = at_edge[seg.a].size() == 1;
      const bool b_open = at_edge[seg.b].size() == 1;
      if (pass == 0 && !a_open && !b_open) continue;
      if (!a_open && b_open) std::swap(seg.a, seg.b);
      used[s] = true;
      Polyline line = {edge_point(seg.a), edge_point(seg.b)};
      std::size_t edge = seg.b;
      while (const auto n = next_unused(edge)) {
        used[*n] = true;
        edge = segments[*n].a == edge ? segments[*n].b : segments[*n].a;
        line.push_back(edge_point(edge));
      }
      contour.lines.push_back(std::move(line));
    }
  }
  return contour;
}

std::optional<Point> contour_max_y(const Contour& contour, double x_lo, double x_hi) {
  std::optional<Point> best;
  for (const auto& line : contour.lines) {
    for (const Point& p : line) {
      if (p.x < x_lo || p.x > x_hi) continue;
      if (!best || p.y > best->y) best = p;
    }
  }
  return best;
}

void write_grid_csv(std::ostream& out, const SweepResult& result) {
  const auto& spec = result.spec;
  out << spec.x.name;
  if (spec.y) out << ',' << spec.y->name;
  out << ',' << column_name(spec.quantity) << '\n';
  const std::size_t nx = result.xs.size();
  for (std::size_t idx = 0; idx < result.values.size(); ++idx) {
    out << fmt::format("{}", result.xs[idx % nx]);
    if (spec.y) out << ',' << fmt::format("{}", result.ys[idx / nx]);
    out << ',';
    if (result.values[idx]) out << fmt::format("{}", *result.values[idx]);
    out << '\n';
  }
}

void write_contour_csv(std::ostream& out, const SweepResult& result) {
  out << "level,segment_id,x,y\n";
  std::size_t id = 0;
  for (const auto& contour : result.contours) {
    for (const auto& line : contour.lines) {
      for (const Point& p : line) {
        out << fmt::format("{},{},{},{}\n", contour.level, id, p.x, p.y);
      }
      ++id;
    }
  }
}

}  // namespace sgdephase::sweep
