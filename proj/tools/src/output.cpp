#include "sgdephase_tools/output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

#include "sgdephase/errors.hpp"
#include "sgdephase/version.hpp"

namespace sgdephase::tools {

using detail::require;

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Value from_optional(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

void Table::add_row(std::vector<Value> row) {
  require(row.size() == columns.size(), ErrorCode::kNumeric, "row width does not match header");
  for (const auto& v : row) {
    if (const auto* d = std::get_if<double>(&v)) {
      require(std::isfinite(*d), ErrorCode::kNumeric, "refusing to emit a non-finite number");
    }
  }
  rows.push_back(std::move(row));
}

std::vector<std::pair<std::string, Value>> reproducibility(const RunConfig& c,
                                                           const std::string& command) {
  const auto& p = c.params;
  std::vector<std::pair<std::string, Value>> block = {
      {"command", command},
      {"version", std::string(kVersion)},
      {"seed", static_cast<std::int64_t>(c.seed)},
      {"mass_kg", p.mass},
      {"eta0_t_per_m", p.eta0},
      {"b0_t", p.b0},
      {"accel_m_s2", p.accel},
      {"theta0_deg", rad_to_deg(p.theta0)},
      {"hbar_j_s", p.constants.hbar},
      {"gamma_e_per_s_t", p.constants.gamma_e},
      {"chi_rho_m3_per_kg", p.constants.chi_rho},
      {"mu0_h_per_m", p.constants.mu0},
      {"gamma_tau_target", c.gamma_tau_target},
      {"sqrt_s_aa_raw", from_optional(c.sqrt_s_aa)},
      {"sqrt_s_tt_raw", from_optional(c.sqrt_s_tt)},
      {"psd_file", c.psd_file ? Value(*c.psd_file) : Value(std::monostate{})},
  };
  return block;
}

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(x);
        } else {
          return fmt::format("{}", x);
        }
      },
      v);
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

nlohmann::ordered_json to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

nlohmann::ordered_json to_json(const std::vector<std::pair<std::string, Value>>& block) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : block) j[k] = to_json(v);
  return j;
}

void write_csv_block(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block) {
  for (const auto& [k, v] : block) out << "# " << k << '=' << format_value(v) << '\n';
}

void write_csv(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block,
               const Table& table) {
  write_csv_block(out, block);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_value(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block,
                const Table& table) {
  nlohmann::ordered_json j = {{"reproducibility", to_json(block)}};
  const auto body = to_json(table);
  j["columns"] = body["columns"];
  j["rows"] = body["rows"];
  out << j.dump(2) << '\n';
}

}  // namespace sgdephase::tools
