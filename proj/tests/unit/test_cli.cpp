#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgdephase/bounds.hpp"
#include "sgdephase_tools/cli.hpp"
#include "sgdephase_tools/config.hpp"
#include "sgdephase_tools/output.hpp"
#include "test_support.hpp"

namespace sgdephase::tools {
namespace {

using sgdephase::testing::rel_diff;
using sgdephase::testing::throws_code;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sgdephase");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sgdephase_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.params.mass, 1e-15);
  EXPECT_EQ(c.params.eta0, 6e3);
  EXPECT_EQ(c.params.b0, 1e-3);
  EXPECT_EQ(c.params.accel, 9.81);
  EXPECT_EQ(c.params.theta0, std::numbers::pi / 2);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.format, Format::kCsv);
}

TEST(Config, DegreesConvertedAtBoundary) {
  const auto c = parse_config("# tilted\ntheta0_deg=89\n\n  accel_m_s2 = 3.5  # comment\n");
  EXPECT_DOUBLE_EQ(c.params.theta0, 89 * std::numbers::pi / 180);
  EXPECT_EQ(c.params.accel, 3.5);
}

TEST(Config, Errors) {
  EXPECT_TRUE(throws_code(ErrorCode::kInvalidParameter, [] { parse_config("mass_kg=-1"); }));
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_config("colour=blue"); }));
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_config("theta0_rad=1.2"); }));
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_config("mass_kg=heavy"); }));
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_config("mass_kg"); }));
  try {
    parse_config("theta0_rad=1.2");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("theta0_deg"), std::string::npos);
  }
  try {
    parse_config("colour=blue");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(Config, FlagsOverrideFile) {
  const auto path = scratch("override.cfg");
  std::ofstream(path) << "accel_m_s2=1\nseed=5\nformat=json\n";
  const auto r = run({"derive", "--config", path.string(), "--seed", "9", "--format", "csv",
                      "--set", "accel_m_s2=2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# seed=9"), std::string::npos);
  EXPECT_NE(r.out.find("# accel_m_s2=2"), std::string::npos);
}

TEST(Cli, DeriveJsonCarriesExactValues) {
  const auto r = run({"derive", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto m = derive(ExperimentParams{});
  const auto& cols = j.at("columns");
  const auto& row = j.at("rows").at(0);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "omega0_rad_s") {
      EXPECT_EQ(row[i].get<double>(), m.omega0);
    }
    if (cols[i] == "tau_s") {
      EXPECT_EQ(row[i].get<double>(), m.tau);
    }
    if (cols[i] == "dx_max_m") {
      EXPECT_EQ(row[i].get<double>(), m.dx_max);
    }
  }
  EXPECT_TRUE(j.at("reproducibility").contains("version"));
  EXPECT_EQ(j.at("reproducibility").at("seed"), 1);
  // Round trip without loss.
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(Cli, SentinelIsNullInJsonAndEmptyInCsv) {
  const auto js = run({"bound", "--format", "json"});
  ASSERT_EQ(js.code, 0) << js.err;
  const auto j = nlohmann::json::parse(js.out);
  bool saw_null = false;
  for (const auto& row : j.at("rows")) {
    for (const auto& v : row) {
      if (v.is_null()) saw_null = true;
      if (v.is_number_float()) {
        EXPECT_TRUE(std::isfinite(v.get<double>()));
      }
    }
  }
  EXPECT_TRUE(saw_null);
}

TEST(Cli, Table1Rows) {
  const auto r = run({"table1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("rows").size(), 6u);
  std::size_t bound_col = 0, within_col = 0;
  const auto& cols = j.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "sqrt_s_bound_raw") bound_col = i;
    if (cols[i] == "within_one_order") within_col = i;
  }
  for (const auto& row : j.at("rows")) {
    EXPECT_TRUE(row.at(within_col).get<bool>());
  }
  EXPECT_LT(rel_diff(j.at("rows").at(4).at(bound_col).get<double>(), 2.65e-9), 2e-3);
}

TEST(Cli, KernelIntegral) {
  const auto r = run({"kernel", "--integral", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("14.8044"), std::string::npos);
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  const std::vector<std::string> common = {"mc", "--shots", "200", "--steps", "256", "--seed",
                                           "4", "--set", "theta0_deg=0", "--set",
                                           "accel_m_s2=0"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--out", a.string()});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--out", b.string()});
  ASSERT_EQ(run(args_a).code, 0);
  ASSERT_EQ(run(args_b).code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));

  const auto s1 = scratch("s1.csv");
  const auto s2 = scratch("s2.csv");
  const std::vector<std::string> sweep = {"sweep", "--x", "theta0_deg:0:80:9", "--y",
                                          "sqrt_s_aa_raw:1e-13:1e-8:11:log", "--quantity",
                                          "gamma_accel", "--contour", "1"};
  auto sw1 = sweep;
  sw1.insert(sw1.end(), {"--out", s1.string()});
  auto sw2 = sweep;
  sw2.insert(sw2.end(), {"--out", s2.string()});
  ASSERT_EQ(run(sw1).code, 0);
  ASSERT_EQ(run(sw2).code, 0);
  EXPECT_EQ(slurp(s1), slurp(s2));
  EXPECT_EQ(slurp(contour_path(s1.string())), slurp(contour_path(s2.string())));
  EXPECT_NE(slurp(contour_path(s1.string())).find("level,segment_id,x,y"), std::string::npos);
}

TEST(Cli, McReportsAnalyticAndZ) {
  const auto r = run({"mc", "--shots", "2000", "--steps", "512", "--set", "theta0_deg=0",
                      "--set", "accel_m_s2=0", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto& cols = j.at("columns");
  const auto& row = j.at("rows").at(0);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "z_score") {
      EXPECT_LT(std::abs(row[i].get<double>()), 4.0);
    }
  }
}

TEST(Cli, ErrorsAreMachineReadable) {
  const auto bad_key = run({"derive", "--set", "colour=blue"});
  EXPECT_EQ(bad_key.code, 2);
  const auto j = nlohmann::json::parse(bad_key.err);
  EXPECT_EQ(j.at("error"), "config");
  EXPECT_NE(j.at("message").get<std::string>().find("colour"), std::string::npos);

  const auto bad_value = run({"derive", "--set", "mass_kg=-1"});
  EXPECT_EQ(bad_value.code, 2);
  EXPECT_EQ(nlohmann::json::parse(bad_value.err).at("error"), "invalid-parameter");

  const auto missing = run({"gamma", "--psd", "/nonexistent.csv"});
  EXPECT_NE(missing.code, 0);
  EXPECT_TRUE(nlohmann::json::accept(missing.err));

  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"sweep", "--preset", "fig9"}).code, 0);
}

TEST(Cli, Helpers) {
  const auto a = parse_axis("sqrt_s_aa_raw:1e-13:1e-8:201:log");
  EXPECT_EQ(a.name, "sqrt_s_aa_raw");
  EXPECT_EQ(a.n, 201u);
  EXPECT_EQ(a.scale, sweep::Scale::kLog);
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_axis("x:1:2"); }));
  EXPECT_TRUE(throws_code(ErrorCode::kConfig, [] { parse_axis("mass_kg:1:2:3:cubic"); }));
  EXPECT_EQ(contour_path("/tmp/out/fig3.csv"), "/tmp/out/fig3.contours.csv");
  for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b"}) {
    EXPECT_NO_THROW(sweep_preset(name).validate()) << name;
  }
}

TEST(Output, TableRejectsNonFinite) {
  Table t{{"a"}, {}};
  t.add_row({1.0});
  EXPECT_ANY_THROW(t.add_row({std::nan("")}));
  EXPECT_ANY_THROW(t.add_row({1.0, 2.0}));
  EXPECT_EQ(format_value(Value{}), "");
  EXPECT_EQ(format_value(Value{0.1}), "0.1");
}

}  // namespace
}  // namespace sgdephase::tools
