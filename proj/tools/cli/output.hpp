#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mlpoisson::cli {

enum class Format { csv, json };

struct OutputSpec {
  Format format = Format::csv;
  std::string path;  ///< empty for standard output
  int precision = 10;
};

inline constexpr int kMinPrecision = 6;
inline constexpr int kMaxPrecision = 17;
inline constexpr int kDefaultPrecision = 10;

/// Formats x with `precision` significant digits: positional notation for
/// 1e-4 <= |x| < 1e6 (and zero), scientific otherwise. Non-finite values
/// print as nan, inf or -inf.
std::string format_number(double x, int precision);

/// An empty cell is written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Document {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Table> tables;
  /// Set when a command fails after producing partial output.
  std::optional<std::string> error;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  Table& table(std::string name, std::vector<std::string> columns) {
    tables.push_back({std::move(name), std::move(columns), {}});
    return tables.back();
  }
};

/// CSV: `# key=value` metadata lines, then per table an optional
/// `# table=name` line (only when there are several), a header row and the
/// data rows; tables are separated by a blank line. A failure adds a final
/// `# error=message` line.
void write_csv(const Document& doc, int precision, std::ostream& os);

/// JSON object {"metadata": {...}, "tables": {name: [row objects]}, "error": ...}.
void write_json(const Document& doc, int precision, std::ostream& os);

void write(const Document& doc, const OutputSpec& spec, std::ostream& os);

}  // namespace mlpoisson::cli
