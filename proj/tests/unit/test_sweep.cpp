#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sgdephase/bounds.hpp"
#include "sgdephase/kernel.hpp"
#include "sgdephase/sweep.hpp"
#include "sgdephase_tools/cli.hpp"
#include "test_support.hpp"

namespace sgdephase::sweep {
namespace {

using sgdephase::testing::rel_diff;
using sgdephase::testing::throws_code;
using bounds::Channel;

TEST(Axis, ValuesHitEndpointsExactly) {
  const Axis lin{"accel_m_s2", 0.0, 0.06, 1201, Scale::kLinear};
  const auto v = lin.values();
  ASSERT_EQ(v.size(), 1201u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 0.06);
  EXPECT_NEAR(v[600], 0.03, 1e-15);

  const Axis lg{"sqrt_s_aa_raw", 1e-13, 1e-8, 6, Scale::kLog};
  const auto w = lg.values();
  EXPECT_EQ(w.front(), 1e-13);
  EXPECT_EQ(w.back(), 1e-8);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_LT(rel_diff(w[i], std::pow(10.0, -13.0 + i)), 1e-13);
}

TEST(Axis, Validation) {
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [] { Axis{"bogus", 0, 1, 3}.validate(); }));
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [] { Axis{"mass_kg", 0, 1, 1}.validate(); }));
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [] { Axis{"mass_kg", 1, 0, 3}.validate(); }));
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [] { Axis{"mass_kg", 0, 1, 3, Scale::kLog}.validate(); }));
  EXPECT_TRUE(is_parameter("theta0_deg"));
  EXPECT_FALSE(is_parameter("theta0_rad"));
}

TEST(SweepSpec, Validation) {
  SweepSpec s;
  s.x = {"accel_m_s2", 0, 1, 3};
  s.validate();
  s.y = Axis{"accel_m_s2", 0, 1, 3};
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [&] { s.validate(); }));
  s.y.reset();
  s.contour_levels = {1.0};
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [&] { s.validate(); }));
  s.contour_levels.clear();
  s.quantity = Quantity::kKernel;
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [&] { s.validate(); }));
  s.x = {"xi", -1, 1, 3};
  s.validate();
  s.quantity = Quantity::kGammaAccel;
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [&] { s.validate(); }));
  s.x = {"accel_m_s2", 0, 1, 3};
  s.fixed = {{"nonsense", 1.0}};
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [&] { s.validate(); }));
}

TEST(Quantity, Names) {
  for (Quantity q : {Quantity::kGammaAccel, Quantity::kGammaTilt, Quantity::kBoundAccel,
                     Quantity::kBoundTilt, Quantity::kDxMax, Quantity::kKernel}) {
    EXPECT_EQ(parse_quantity(to_string(q)), q);
  }
  EXPECT_EQ(column_name(Quantity::kBoundAccel), "sqrt_s_aa_bound_raw");
  EXPECT_TRUE(throws_code(ErrorCode::kSpec, [] { parse_quantity("nope"); }));
}

TEST(Sweep, PointsMatchDirectEvaluation) {
  SweepSpec s;
  s.x = {"theta0_deg", 0.0, 80.0, 9};
  s.y = Axis{"accel_m_s2", 0.0, 5.0, 6};
  s.quantity = Quantity::kBoundAccel;
  const ExperimentParams base;
  const auto r = run_sweep(s, base);
  ASSERT_EQ(r.values.size(), 54u);
  for (std::size_t iy = 0; iy < 6; ++iy) {
    for (std::size_t ix = 0; ix < 9; ++ix) {
      ExperimentParams p = base;
      p.theta0 = deg_to_rad(r.xs[ix]);
      p.accel = r.ys[iy];
      const auto b = bounds::psd_bound(derive(p), p, Channel::kAccel);
      ASSERT_TRUE(r.at(ix, iy).has_value());
      EXPECT_EQ(*r.at(ix, iy), *b.sqrt_psd_bound) << ix << "," << iy;
      EXPECT_EQ(*r.at(ix, iy), *evaluate_point(s, base, r.xs[ix], r.ys[iy]));
    }
  }
}

TEST(Sweep, SentinelForUnboundedCells) {
  SweepSpec s;
  s.x = {"theta0_deg", 0.0, 90.0, 3};
  s.quantity = Quantity::kBoundAccel;
  const auto r = run_sweep(s, ExperimentParams{});
  EXPECT_TRUE(r.at(0).has_value());
  EXPECT_FALSE(r.at(2).has_value());
  std::ostringstream csv;
  write_grid_csv(csv, r);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "theta0_deg,sqrt_s_aa_bound_raw");
  EXPECT_NE(text.find("\n90,\n"), std::string::npos);
}

TEST(Sweep, KernelAndDxMaxQuantities) {
  SweepSpec k;
  k.x = {"xi", -2.0, 2.0, 5};
  k.quantity = Quantity::kKernel;
  const auto rk = run_sweep(k, ExperimentParams{});
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(*rk.at(i), kernel::f_aa(rk.xs[i]));

  const auto fig1 = run_sweep(tools::sweep_preset("fig1"), ExperimentParams{});
  const double ref = fig1.xs[0] * *fig1.at(0);
  for (std::size_t i = 0; i < fig1.xs.size(); ++i) {
    EXPECT_LT(rel_diff(fig1.xs[i] * *fig1.at(i), ref), 1e-12);
  }
}

TEST(Contour, CircleOnLinearGrid) {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 60; ++i) xs.push_back(-1.5 + 0.05 * i);
  ys = xs;
  std::vector<std::optional<double>> v;
  for (double y : ys) for (double x : xs) v.emplace_back(x * x + y * y);
  const auto c = extract_contour(xs, ys, v, 1.0);
  ASSERT_EQ(c.lines.size(), 1u);
  const auto& line = c.lines.front();
  EXPECT_GT(line.size(), 100u);
  // Closed loop.
  EXPECT_DOUBLE_EQ(line.front().x, line.back().x);
  EXPECT_DOUBLE_EQ(line.front().y, line.back().y);
  for (const auto& p : line) EXPECT_NEAR(std::hypot(p.x, p.y), 1.0, 2e-3);
}

TEST(Contour, SkipsSentinelCellsAndEmptyLevels) {
  std::vector<double> xs = {0, 1, 2}, ys = {0, 1};
  std::vector<std::optional<double>> v = {0.0, 1.0, std::nullopt, 0.0, 1.0, std::nullopt};
  const auto c = extract_contour(xs, ys, v, 0.5);
  ASSERT_EQ(c.lines.size(), 1u);
  for (const auto& p : c.lines.front()) EXPECT_NEAR(p.x, 0.5, 1e-12);
  EXPECT_TRUE(extract_contour(xs, ys, v, 5.0).lines.empty());
}

TEST(Contour, TracksBoundCurve) {
  auto spec = tools::sweep_preset("fig3");
  spec.x.n = 121;
  spec.y->n = 41;
  const auto r = run_sweep(spec, ExperimentParams{});
  ASSERT_EQ(r.contours.size(), 1u);
  ASSERT_FALSE(r.contours[0].lines.empty());
  const auto bound_at = [](double a) {
    ExperimentParams q;
    q.theta0 = 0.0;
    q.accel = a;
    return *bounds::psd_bound(derive(q), q, Channel::kAccel).sqrt_psd_bound;
  };
  // Gamma grows monotonically in y, so each vertex lies between the exact bound
  // curve sampled at the bracketing grid columns.
  std::size_t on_columns = 0;
  for (const auto& line : r.contours[0].lines) {
    for (const auto& p : line) {
      const auto it = std::lower_bound(r.xs.begin(), r.xs.end(), p.x);
      ASSERT_NE(it, r.xs.end());
      if (*it == p.x) {
        EXPECT_LT(rel_diff(p.y, bound_at(p.x)), 1e-9) << p.x;
        ++on_columns;
        continue;
      }
      const double lo = bound_at(*(it - 1));
      const double hi = bound_at(*it);
      EXPECT_GE(p.y, std::min(lo, hi) * (1 - 1e-9)) << p.x;
      EXPECT_LE(p.y, std::max(lo, hi) * (1 + 1e-9)) << p.x;
    }
  }
  EXPECT_GT(on_columns, 0u);
}

TEST(Contour, Fig3ArgmaxAtAccelMinimum) {
  const auto r = run_sweep(tools::sweep_preset("fig3"), ExperimentParams{});
  const auto top = contour_max_y(r.contours.at(0), 0.0, 0.06);
  ASSERT_TRUE(top.has_value());
  EXPECT_NEAR(top->x, 0.0300, 5e-4);
}

TEST(Contour, Fig5ArgmaxAtThetaMinimum) {
  const auto r = run_sweep(tools::sweep_preset("fig5"), ExperimentParams{});
  const auto top = contour_max_y(r.contours.at(0), 89.6, 89.99);
  ASSERT_TRUE(top.has_value());
  EXPECT_NEAR(top->x, 89.825, 0.005);
}

TEST(Sweep, ContourCsvLayout) {
  auto spec = tools::sweep_preset("fig6b");
  spec.x.n = 11;
  spec.y->n = 11;
  const auto r = run_sweep(spec, ExperimentParams{});
  std::ostringstream out;
  write_contour_csv(out, r);
  EXPECT_EQ(out.str().substr(0, 21), "level,segment_id,x,y\n");
}

}  // namespace
}  // namespace sgdephase::sweep
