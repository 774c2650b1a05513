#pragma once

// Tabular results and their CSV / JSON serialization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sgdephase_tools/config.hpp"

namespace sgdephase::tools {

/// Empty (std::monostate) is the documented sentinel: an empty CSV field or
/// JSON null.
using Value = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

Value from_optional(const std::optional<double>& v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
};

/// Full parameter echo, seed and version, as ordered key/value pairs.
std::vector<std::pair<std::string, Value>> reproducibility(const RunConfig& config,
                                                           const std::string& command);

std::string format_value(const Value& v);
nlohmann::ordered_json to_json(const Value& v);
nlohmann::ordered_json to_json(const Table& table);
nlohmann::ordered_json to_json(const std::vector<std::pair<std::string, Value>>& block);

/// `# key=value` lines, then the header and rows.
void write_csv(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block,
               const Table& table);
void write_csv_block(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block);

/// {"reproducibility": {...}, "columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& out, const std::vector<std::pair<std::string, Value>>& block,
                const Table& table);

}  // namespace sgdephase::tools
