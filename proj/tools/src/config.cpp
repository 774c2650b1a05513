#include "sgdephase_tools/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sgdephase/errors.hpp"

namespace sgdephase::tools {

using detail::raise;
using detail::require;

namespace {

struct KeyInfo {
  std::string_view key;
  std::string_view base;  // name without the unit suffix
};

constexpr KeyInfo kKeys[] = {
    {"mass_kg", "mass"},
    {"eta0_t_per_m", "eta0"},
    {"b0_t", "b0"},
    {"accel_m_s2", "accel"},
    {"theta0_deg", "theta0"},
    {"sqrt_s_aa_raw", "sqrt_s_aa"},
    {"sqrt_s_tt_raw", "sqrt_s_tt"},
    {"psd_file", "psd_file"},
    {"seed", "seed"},
    {"n_shots", "n_shots"},
    {"steps", "steps"},
    {"arm_correlation", "arm_correlation"},
    {"gamma_tau_target", "gamma_tau_target"},
    {"channel", "channel"},
    {"method", "method"},
    {"format", "format"},
    {"out", "out"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(v),
          ErrorCode::kConfig, fmt::format("'{}' expects a finite number, got '{}'", key, text));
  return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::kConfig,
          fmt::format("'{}' expects a non-negative integer, got '{}'", key, text));
  return v;
}

[[noreturn]] void unknown_key(std::string_view key) {
  for (const auto& info : kKeys) {
    if (key == info.base ||
        (key.size() > info.base.size() && key.substr(0, info.base.size()) == info.base &&
         key[info.base.size()] == '_')) {
      raise(ErrorCode::kConfig,
            fmt::format("unit-suffix mismatch for '{}': expected '{}'", key, info.key));
    }
  }
  raise(ErrorCode::kConfig, fmt::format("unknown key '{}'", key));
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& info : kKeys) k.push_back(info.key);
    return k;
  }();
  return keys;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  raise(ErrorCode::kConfig, fmt::format("format must be csv or json, got '{}'", name));
}

dephasing::Channel parse_channel(std::string_view name) {
  if (name == "accel") return dephasing::Channel::kAccel;
  if (name == "tilt") return dephasing::Channel::kTilt;
  raise(ErrorCode::kConfig, fmt::format("channel must be accel or tilt, got '{}'", name));
}

montecarlo::McMethod parse_method(std::string_view name) {
  if (name == "linear") return montecarlo::McMethod::kLinearResponse;
  if (name == "full-action") return montecarlo::McMethod::kFullAction;
  raise(ErrorCode::kConfig, fmt::format("method must be linear or full-action, got '{}'", name));
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  const auto number = [&] { return to_double(key, value); };
  if (key == "mass_kg") {
    c.params.mass = number();
  } else if (key == "eta0_t_per_m") {
    c.params.eta0 = number();
  } else if (key == "b0_t") {
    c.params.b0 = number();
  } else if (key == "accel_m_s2") {
    c.params.accel = number();
  } else if (key == "theta0_deg") {
    c.params.theta0 = deg_to_rad(number());
  } else if (key == "sqrt_s_aa_raw") {
    c.sqrt_s_aa = number();
  } else if (key == "sqrt_s_tt_raw") {
    c.sqrt_s_tt = number();
  } else if (key == "psd_file") {
    c.psd_file = std::string(value);
  } else if (key == "seed") {
    c.seed = to_unsigned(key, value);
  } else if (key == "n_shots") {
    c.n_shots = to_unsigned(key, value);
  } else if (key == "steps") {
    c.steps = to_unsigned(key, value);
  } else if (key == "arm_correlation") {
    c.arm_correlation = number();
  } else if (key == "gamma_tau_target") {
    c.gamma_tau_target = number();
  } else if (key == "channel") {
    c.channel = parse_channel(value);
    c.channel_given = true;
  } else if (key == "method") {
    c.method = parse_method(value);
  } else if (key == "format") {
    c.format = parse_format(value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else {
    unknown_key(key);
  }
}

void merge_config(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::kConfig,
            fmt::format("line {}: expected key=value", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorCode::kConfig, fmt::format("line {}: empty key", line_no));
    apply_setting(config, key, value);
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  merge_config(config, text);
  config.validate();
  return config;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void RunConfig::validate() const {
  params.validate();
  derive(params);
  for (const auto& level : {sqrt_s_aa, sqrt_s_tt}) {
    require(!level || *level >= 0.0, ErrorCode::kInvalidParameter,
            "amplitude spectral densities must be non-negative");
  }
  require(gamma_tau_target > 0.0, ErrorCode::kInvalidParameter,
          "gamma_tau_target must be positive");
  require(std::abs(arm_correlation) <= 1.0, ErrorCode::kInvalidParameter,
          "arm_correlation must lie in [-1, 1]");
  require(n_shots >= 100, ErrorCode::kInvalidParameter, "n_shots must be at least 100");
  require(steps >= 16, ErrorCode::kInvalidParameter, "steps must be at least 16");
}

}  // namespace sgdephase::tools
