#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lhv {

/// Empty cells (std::monostate) stand for values that are not finite numbers;
/// they print as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct ReportTable {
  std::string name;
  std::vector<std::string> schema;
  std::vector<std::vector<Cell>> rows;
  /// Ordered key/value echo of the resolved run parameters.
  std::vector<std::pair<std::string, Cell>> metadata;

  /// Appends a row; throws std::logic_error if its width differs from the schema.
  void add_row(std::vector<Cell> row);
  void add_meta(std::string key, Cell value) { metadata.emplace_back(std::move(key), std::move(value)); }
};

/// Probabilities and residuals: scientific notation, 12 significant digits.
std::string format_number(double v);

/// `#`-prefixed metadata lines, header, rows; LF line endings.
std::string to_csv(const ReportTable& table);

/// {"metadata": {...}, "schema": [...], "rows": [[...], ...]}
std::string to_json(const ReportTable& table);

}  // namespace lhv
