#include "sgdephase_tools/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "sgdephase/bounds.hpp"
#include "sgdephase/dephasing.hpp"
#include "sgdephase/errors.hpp"
#include "sgdephase/kernel.hpp"
#include "sgdephase/montecarlo.hpp"
#include "sgdephase/noise.hpp"
#include "sgdephase/version.hpp"
#include "sgdephase_tools/config.hpp"
#include "sgdephase_tools/output.hpp"

namespace sgdephase::tools {

using dephasing::Channel;
using detail::raise;
using detail::require;

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma_tau_target;
  std::string channel;
  std::string method;
  std::vector<std::string> settings;

  // gamma / mc
  std::optional<double> sqrt_s;
  std::string psd_path;
  // mc
  std::optional<std::size_t> shots;
  std::optional<std::size_t> steps;
  std::optional<double> rho;
  std::size_t synthesis_factor = 32;
  // sweep
  std::string preset;
  std::string x_axis;
  std::string y_axis;
  std::string quantity;
  std::vector<double> contours;
  std::string contour_out;
  // kernel
  bool integral = false;
  std::optional<double> xi;
};

using Block = std::vector<std::pair<std::string, Value>>;

RunConfig build_config(const Options& o) {
  RunConfig c;
  if (!o.config_path.empty()) merge_config(c, read_text_file(o.config_path));
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    require(eq != std::string::npos, ErrorCode::kConfig,
            fmt::format("--set expects key=value, got '{}'", s));
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.format.empty()) c.format = parse_format(o.format);
  if (o.seed) c.seed = *o.seed;
  if (o.gamma_tau_target) c.gamma_tau_target = *o.gamma_tau_target;
  if (!o.channel.empty()) {
    c.channel = parse_channel(o.channel);
    c.channel_given = true;
  }
  if (!o.method.empty()) c.method = parse_method(o.method);
  if (!o.out_path.empty()) c.out = o.out_path;
  if (!o.psd_path.empty()) c.psd_file = o.psd_path;
  if (o.sqrt_s) (c.channel == Channel::kAccel ? c.sqrt_s_aa : c.sqrt_s_tt) = *o.sqrt_s;
  if (o.shots) c.n_shots = *o.shots;
  if (o.steps) c.steps = *o.steps;
  if (o.rho) c.arm_correlation = *o.rho;
  c.validate();
  return c;
}

std::optional<double> channel_level(const RunConfig& c, Channel channel) {
  return channel == Channel::kAccel ? c.sqrt_s_aa : c.sqrt_s_tt;
}

std::string channel_name(Channel channel) { return std::string(dephasing::to_string(channel)); }

// Writes to --out when given, otherwise to the console stream.
void emit(const RunConfig& c, std::ostream& console,
          const std::function<void(std::ostream&)>& writer) {
  if (!c.out) {
    writer(console);
    return;
  }
  std::ofstream file(*c.out, std::ios::binary);
  require(static_cast<bool>(file), ErrorCode::kIo, fmt::format("cannot write '{}'", *c.out));
  writer(file);
  require(static_cast<bool>(file), ErrorCode::kIo, fmt::format("failed writing '{}'", *c.out));
}

void emit_table(const RunConfig& c, const std::string& command, const Table& table,
                std::ostream& console) {
  const Block block = reproducibility(c, command);
  emit(c, console, [&](std::ostream& os) {
    if (c.format == Format::kJson) {
      write_json(os, block, table);
    } else {
      write_csv(os, block, table);
    }
  });
}

void cmd_derive(const RunConfig& c, std::ostream& out) {
  const DerivedModel m = derive(c.params);
  Table t{{"omega0_rad_s", "tau_s", "c_right_j_per_t", "c_left_j_per_t", "ctilde_right_n",
           "ctilde_left_n", "dx_max_m", "diamagnetic_force_n", "spin_force_n"},
          {}};
  t.add_row({m.omega0, m.tau, m.c_right, m.c_left, m.ctilde_right, m.ctilde_left, m.dx_max,
             diamagnetic_force(c.params),
             c.params.constants.hbar * c.params.constants.gamma_e * c.params.eta0});
  emit_table(c, "derive", t, out);
}

void cmd_gamma(const RunConfig& c, std::ostream& out) {
  const DerivedModel m = derive(c.params);
  Table t{{"channel", "noise", "sqrt_s_raw", "gamma_rad2", "gamma_tau", "coherence", "tau_s"}, {}};
  const auto add = [&](Channel ch, const dephasing::DephasingResult& r, const std::string& kind,
                       Value level) {
    t.add_row({channel_name(ch), kind, std::move(level), r.gamma, r.gamma_tau, r.coherence, m.tau});
  };

  if (c.psd_file) {
    const auto psd = noise::load_psd_csv(*c.psd_file);
    add(c.channel, dephasing::gamma_colored(m, c.params, c.channel, psd), "tabulated",
        std::monostate{});
  } else {
    std::vector<Channel> channels;
    if (c.channel_given) {
      channels.push_back(c.channel);
    } else {
      if (c.sqrt_s_aa) channels.push_back(Channel::kAccel);
      if (c.sqrt_s_tt) channels.push_back(Channel::kTilt);
    }
    require(!channels.empty(), ErrorCode::kConfig,
            "no noise level: set sqrt_s_aa_raw / sqrt_s_tt_raw, --sqrt-s or --psd");
    for (Channel ch : channels) {
      const auto level = channel_level(c, ch);
      require(level.has_value(), ErrorCode::kConfig,
              fmt::format("no noise level for the {} channel", channel_name(ch)));
      const double s = *level * *level;
      const auto r = ch == Channel::kAccel ? dephasing::gamma_accel_white(m, c.params, s)
                                           : dephasing::gamma_tilt_white(m, c.params, s);
      add(ch, r, "white", *level);
    }
  }
  emit_table(c, "gamma", t, out);
}

void cmd_bound(const RunConfig& c, std::ostream& out) {
  const DerivedModel m = derive(c.params);
  Table t{{"channel", "theta0_deg", "accel_m_s2", "gamma_tau_target", "sqrt_s_bound_raw",
           "unbounded"},
          {}};
  std::vector<Channel> channels = {Channel::kAccel, Channel::kTilt};
  if (c.channel_given) channels = {c.channel};
  for (Channel ch : channels) {
    const auto b = bounds::psd_bound(m, c.params, ch, c.gamma_tau_target);
    t.add_row({channel_name(ch), rad_to_deg(c.params.theta0), c.params.accel, c.gamma_tau_target,
               from_optional(b.sqrt_psd_bound), b.unbounded()});
  }
  emit_table(c, "bound", t, out);
}

void cmd_table1(const RunConfig& c, std::ostream& out) {
  Table t{{"row", "channel", "theta0_deg", "accel_m_s2", "sqrt_s_bound_raw", "quoted_order",
           "ratio", "within_one_order"},
          {}};
  const auto add = [&](const std::string& row, Channel ch, double theta, double accel,
                       double quoted) {
    ExperimentParams p = c.params;
    p.theta0 = theta;
    p.accel = accel;
    const auto b = bounds::psd_bound(derive(p), p, ch, c.gamma_tau_target);
    Value bound = from_optional(b.sqrt_psd_bound);
    Value ratio = std::monostate{};
    Value within = false;
    if (b.sqrt_psd_bound) {
      const double r = *b.sqrt_psd_bound / quoted;
      ratio = r;
      within = std::abs(std::log10(r)) <= 1.0;
    }
    t.add_row({row, channel_name(ch), rad_to_deg(theta), accel, bound, quoted, ratio, within});
  };

  ExperimentParams at_g = c.params;
  at_g.accel = 9.81;
  const auto theta_m = bounds::find_theta_min(at_g);
  ExperimentParams flat = c.params;
  flat.theta0 = 0.0;
  const double a_m = bounds::find_a_min(flat);

  add("a=0", Channel::kAccel, 0.0, 0.0, 1e-11);
  add("a=3", Channel::kAccel, 0.0, 3.0, 1e-13);
  add("theta0=89deg", Channel::kAccel, deg_to_rad(89.0), 9.81, 1e-10);
  add("theta_m", Channel::kAccel, theta_m.theta, 9.81, 1e-6);
  add("a_m", Channel::kAccel, 0.0, a_m, 1e-8);
  add("tilt", Channel::kTilt, std::numbers::pi / 2, 9.81, 1e-10);
  emit_table(c, "table1", t, out);
}

void cmd_kernel(const RunConfig& c, const Options& o, std::ostream& out) {
  if (o.integral) {
    const auto k = kernel::kernel_integral();
    Table t{{"integral", "error_estimate", "tail_bound", "exact"}, {}};
    t.add_row({k.value, k.error_estimate, k.tail_bound, kernel::kernel_integral_exact()});
    emit_table(c, "kernel", t, out);
    return;
  }
  Table t{{"xi", "f_aa"}, {}};
  if (o.xi) {
    t.add_row({*o.xi, kernel::f_aa(*o.xi)});
  } else {
    sweep::Axis axis{"xi", -5.0, 5.0, 201, sweep::Scale::kLinear};
    for (double xi : axis.values()) t.add_row({xi, kernel::f_aa(xi)});
  }
  emit_table(c, "kernel", t, out);
}

void cmd_mc(const RunConfig& c, const Options& o, std::ostream& out) {
  const DerivedModel m = derive(c.params);
  montecarlo::McConfig mc;
  mc.n_shots = c.n_shots;
  mc.steps = c.steps;
  mc.seed = c.seed;
  mc.channel = c.channel;
  mc.method = c.method;
  mc.arm_correlation = c.arm_correlation;
  mc.synthesis_factor = o.synthesis_factor;

  double analytic = 0.0;
  Value level_out = std::monostate{};
  if (c.psd_file) {
    mc.psd = noise::load_psd_csv(*c.psd_file);
    analytic = dephasing::gamma_colored(m, c.params, c.channel, mc.psd).gamma;
  } else {
    double level = 1.0;
    if (const auto given = channel_level(c, c.channel)) {
      level = *given;
    } else if (const auto b = bounds::psd_bound(m, c.params, c.channel).sqrt_psd_bound) {
      level = *b / 100.0;
    }
    level_out = level;
    mc.psd = noise::PsdSpec::white(level * level);
    analytic = dephasing::white_rate_coefficient(m, c.params, c.channel) * level * level;
  }
  // Correlated arms change the prediction; the white-noise figure stays the
  // independent-arm reference.
  const auto est = montecarlo::mc_variance(mc, m, c.params);
  double z = 0.0;
  if (est.std_error > 0.0) {
    z = (est.variance - analytic) / est.std_error;
  } else {
    require(est.variance == analytic, ErrorCode::kNumeric,
            "zero standard error with a nonzero deviation from the prediction");
  }

  Table t{{"channel", "method", "n_shots", "steps", "arm_correlation", "sqrt_s_raw",
           "variance_rad2", "std_error_rad2", "gaussian_std_error_rad2", "mean_rad",
           "std_error_mean_rad", "analytic_rad2", "z_score", "gamma_tau", "linear_variance_rad2",
           "nonlinear_flag"},
          {}};
  t.add_row({channel_name(c.channel), std::string(montecarlo::to_string(c.method)),
             static_cast<std::int64_t>(est.n_shots), static_cast<std::int64_t>(mc.steps),
             c.arm_correlation, level_out, est.variance, est.std_error, est.gaussian_stderr,
             est.mean, est.std_error_mean, analytic, z, est.variance * m.tau,
             est.linear_variance, est.nonlinear_flag});
  emit_table(c, "mc", t, out);
}

void cmd_sweep(const RunConfig& c, const Options& o, std::ostream& out) {
  sweep::SweepSpec spec;
  if (!o.preset.empty()) {
    spec = sweep_preset(o.preset, c.gamma_tau_target);
  } else {
    require(!o.x_axis.empty() && !o.quantity.empty(), ErrorCode::kConfig,
            "sweep needs --preset or --x and --quantity");
  }
  if (!o.x_axis.empty()) spec.x = parse_axis(o.x_axis);
  if (!o.y_axis.empty()) spec.y = parse_axis(o.y_axis);
  if (!o.quantity.empty()) spec.quantity = sweep::parse_quantity(o.quantity);
  if (!o.contours.empty()) spec.contour_levels = o.contours;
  spec.gamma_tau_target = c.gamma_tau_target;

  const auto result = sweep::run_sweep(spec, c.params);
  const Block block = reproducibility(c, "sweep");

  if (c.format == Format::kJson) {
    emit(c, out, [&](std::ostream& os) {
      nlohmann::ordered_json j = {{"reproducibility", to_json(block)}};
      auto columns = nlohmann::ordered_json::array({spec.x.name});
      if (spec.y) columns.push_back(spec.y->name);
      columns.push_back(std::string(sweep::column_name(spec.quantity)));
      j["columns"] = columns;
      auto rows = nlohmann::ordered_json::array();
      const std::size_t nx = result.xs.size();
      for (std::size_t i = 0; i < result.values.size(); ++i) {
        auto r = nlohmann::ordered_json::array({result.xs[i % nx]});
        if (spec.y) r.push_back(result.ys[i / nx]);
        r.push_back(to_json(from_optional(result.values[i])));
        rows.push_back(std::move(r));
      }
      j["rows"] = std::move(rows);
      auto contours = nlohmann::ordered_json::array();
      std::size_t id = 0;
      for (const auto& contour : result.contours) {
        for (const auto& line : contour.lines) {
          auto pts = nlohmann::ordered_json::array();
          for (const auto& p : line) pts.push_back({p.x, p.y});
          contours.push_back({{"level", contour.level}, {"segment_id", id++}, {"points", pts}});
        }
      }
      j["contours"] = std::move(contours);
      os << j.dump(2) << '\n';
    });
    return;
  }

  emit(c, out, [&](std::ostream& os) {
    write_csv_block(os, block);
    sweep::write_grid_csv(os, result);
  });
  if (!result.contours.empty() && (c.out || !o.contour_out.empty())) {
    const std::string path = o.contour_out.empty() ? contour_path(*c.out) : o.contour_out;
    std::ofstream file(path, std::ios::binary);
    require(static_cast<bool>(file), ErrorCode::kIo, fmt::format("cannot write '{}'", path));
    write_csv_block(file, block);
    sweep::write_contour_csv(file, result);
  }
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "key=value configuration file");
  sub->add_option("--out", o.out_path, "output file (default: stdout)");
  sub->add_option("--format", o.format, "csv or json");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--gamma-tau-target", o.gamma_tau_target, "coherence target for bounds");
  sub->add_option("--channel", o.channel, "accel or tilt");
  sub->add_option("--method", o.method, "linear or full-action");
  sub->add_option("--set", o.settings, "override a configuration key (key=value)");
}

}  // namespace

sweep::Axis parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  require(parts.size() == 4 || parts.size() == 5, ErrorCode::kConfig,
          fmt::format("axis must be name:min:max:n[:log], got '{}'", text));
  sweep::Axis axis;
  axis.name = parts[0];
  try {
    std::size_t used = 0;
    axis.min = std::stod(parts[1], &used);
    require(used == parts[1].size(), ErrorCode::kConfig, "bad axis minimum");
    axis.max = std::stod(parts[2], &used);
    require(used == parts[2].size(), ErrorCode::kConfig, "bad axis maximum");
    axis.n = std::stoul(parts[3], &used);
    require(used == parts[3].size(), ErrorCode::kConfig, "bad axis count");
  } catch (const std::logic_error&) {
    raise(ErrorCode::kConfig, fmt::format("malformed axis '{}'", text));
  }
  if (parts.size() == 5) {
    require(parts[4] == "log" || parts[4] == "linear", ErrorCode::kConfig,
            fmt::format("axis scale must be log or linear, got '{}'", parts[4]));
    axis.scale = parts[4] == "log" ? sweep::Scale::kLog : sweep::Scale::kLinear;
  }
  axis.validate();
  return axis;
}

sweep::SweepSpec sweep_preset(std::string_view name, double gamma_tau_target) {
  using sweep::Axis;
  using sweep::Quantity;
  using sweep::Scale;
  sweep::SweepSpec s;
  s.gamma_tau_target = gamma_tau_target;
  if (name == "fig1") {
    s.x = Axis{"mass_kg", 1e-17, 1e-12, 101, Scale::kLog};
    s.quantity = Quantity::kDxMax;
  } else if (name == "fig2") {
    s.x = Axis{"xi", -5.0, 5.0, 1001, Scale::kLinear};
    s.quantity = Quantity::kKernel;
  } else if (name == "fig3") {
    s.x = Axis{"accel_m_s2", 0.0, 0.06, 1201, Scale::kLinear};
    s.y = Axis{"sqrt_s_aa_raw", 1e-13, 1e-8, 201, Scale::kLog};
    s.quantity = Quantity::kGammaAccel;
    s.fixed = {{"theta0_deg", 0.0}};
  } else if (name == "fig4") {
    s.x = Axis{"theta0_deg", 0.0, 87.0, 871, Scale::kLinear};
    s.y = Axis{"sqrt_s_aa_raw", 1e-13, 1e-8, 201, Scale::kLog};
    s.quantity = Quantity::kGammaAccel;
    s.fixed = {{"accel_m_s2", 0.0}};
  } else if (name == "fig5") {
    s.x = Axis{"theta0_deg", 89.6, 90.0, 801, Scale::kLinear};
    s.y = Axis{"sqrt_s_aa_raw", 1e-12, 1e-4, 201, Scale::kLog};
    s.quantity = Quantity::kGammaAccel;
    s.fixed = {{"accel_m_s2", 9.81}};
  } else if (name == "fig6a") {
    s.x = Axis{"theta0_deg", 0.0, 90.0, 181, Scale::kLinear};
    s.y = Axis{"sqrt_s_tt_raw", 1e-12, 1e-6, 201, Scale::kLog};
    s.quantity = Quantity::kGammaTilt;
    s.fixed = {{"accel_m_s2", 9.81}};
  } else if (name == "fig6b") {
    s.x = Axis{"accel_m_s2", 0.0, 20.0, 201, Scale::kLinear};
    s.y = Axis{"sqrt_s_tt_raw", 1e-12, 1e-6, 201, Scale::kLog};
    s.quantity = Quantity::kGammaTilt;
    s.fixed = {{"theta0_deg", 90.0}};
  } else {
    raise(ErrorCode::kConfig, fmt::format("unknown sweep preset '{}'", name));
  }
  if (s.y) s.contour_levels = {gamma_tau_target};
  return s;
}

std::string contour_path(const std::string& out_path) {
  std::filesystem::path p(out_path);
  p.replace_extension();
  return p.string() + ".contours.csv";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dephasing of a one-loop Stern-Gerlach interferometer from acceleration and "
               "tilt noise",
               "sgdephase"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options o;
  auto* derive_cmd = app.add_subcommand("derive", "trap frequency, loop time, forces, dx_max");
  auto* gamma_cmd = app.add_subcommand("gamma", "dephasing rate for a white or tabulated PSD");
  auto* bound_cmd = app.add_subcommand("bound", "largest tolerable amplitude spectral density");
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter grid with contour extraction");
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo phase variance");
  auto* table_cmd = app.add_subcommand("table1", "bounds at the reference operating points");
  auto* kernel_cmd = app.add_subcommand("kernel", "acceleration kernel f_aa");
  for (auto* sub : app.get_subcommands({})) add_common(sub, o);

  gamma_cmd->add_option("--sqrt-s", o.sqrt_s, "white amplitude for the selected channel");
  gamma_cmd->add_option("--psd", o.psd_path, "tabulated PSD file (omega_rad_s,psd_value)");
  mc_cmd->add_option("--sqrt-s", o.sqrt_s, "white amplitude (default: bound / 100)");
  mc_cmd->add_option("--psd", o.psd_path, "tabulated PSD file");
  mc_cmd->add_option("--shots", o.shots, "number of shots");
  mc_cmd->add_option("--steps", o.steps, "time steps per loop");
  mc_cmd->add_option("--rho", o.rho, "arm correlation in [-1, 1]");
  mc_cmd->add_option("--synthesis-factor", o.synthesis_factor, "loops per colored synthesis");
  sweep_cmd->add_option("--preset", o.preset, "fig1, fig2, fig3, fig4, fig5, fig6a, fig6b");
  sweep_cmd->add_option("--x", o.x_axis, "x axis name:min:max:n[:log]");
  sweep_cmd->add_option("--y", o.y_axis, "y axis name:min:max:n[:log]");
  sweep_cmd->add_option("--quantity", o.quantity,
                        "gamma_accel, gamma_tilt, bound_accel, bound_tilt, dx_max, kernel");
  sweep_cmd->add_option("--contour", o.contours, "contour level (repeatable)");
  sweep_cmd->add_option("--contour-out", o.contour_out, "contour CSV path");
  kernel_cmd->add_flag("--integral", o.integral, "integral over the real line");
  kernel_cmd->add_option("--xi", o.xi, "evaluate at one point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const RunConfig c = build_config(o);
    if (derive_cmd->parsed()) cmd_derive(c, out);
    if (gamma_cmd->parsed()) cmd_gamma(c, out);
    if (bound_cmd->parsed()) cmd_bound(c, out);
    if (sweep_cmd->parsed()) cmd_sweep(c, o, out);
    if (mc_cmd->parsed()) cmd_mc(c, o, out);
    if (table_cmd->parsed()) cmd_table1(c, out);
    if (kernel_cmd->parsed()) cmd_kernel(c, o, out);
  } catch (const Error& e) {
    err << nlohmann::json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump()
        << '\n';
    return e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kInvalidParameter ? 2 : 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sgdephase::tools
