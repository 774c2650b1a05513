#pragma once

// Run configuration: flat `key=value` text with `#` comments.
//
// Physical keys carry their unit in the suffix (mass_kg, theta0_deg, ...).
// Angles are degrees here and radians everywhere past this boundary, and noise
// levels are amplitudes (sqrt_s_*), squared before use.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgdephase/dephasing.hpp"
#include "sgdephase/model.hpp"
#include "sgdephase/montecarlo.hpp"

namespace sgdephase::tools {

enum class Format { kCsv, kJson };

struct RunConfig {
  ExperimentParams params;
  std::optional<double> sqrt_s_aa;  // raw amplitude, acceleration channel
  std::optional<double> sqrt_s_tt;  // rad, tilt channel
  std::optional<std::string> psd_file;
  std::uint64_t seed = 1;
  std::size_t n_shots = 10000;
  std::size_t steps = std::size_t{1} << 14;
  double arm_correlation = 0.0;
  double gamma_tau_target = 1.0;
  dephasing::Channel channel = dephasing::Channel::kAccel;
  bool channel_given = false;
  montecarlo::McMethod method = montecarlo::McMethod::kLinearResponse;
  Format format = Format::kCsv;
  std::optional<std::string> out;

  /// Checks every value against the model invariants. Throws on failure.
  void validate() const;
};

/// Accepted keys, in echo order.
const std::vector<std::string_view>& config_keys();

/// Sets one key. Unknown keys and keys with the wrong unit suffix are errors
/// (ErrorCode::kConfig); malformed values too. Does not validate.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses the whole text onto defaults and validates the result.
RunConfig parse_config(std::string_view text);
/// Applies the text on top of an existing configuration (no validation).
void merge_config(RunConfig& config, std::string_view text);
std::string read_text_file(const std::string& path);

Format parse_format(std::string_view name);
dephasing::Channel parse_channel(std::string_view name);
montecarlo::McMethod parse_method(std::string_view name);

}  // namespace sgdephase::tools
