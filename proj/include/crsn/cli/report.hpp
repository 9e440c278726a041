#ifndef CRSN_CLI_REPORT_HPP
#define CRSN_CLI_REPORT_HPP

// Tabular results written as CSV or JSON. Numbers use the shortest text that
// reads back to the same double, independent of locale.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace crsn::cli {

/// Bumped whenever a command's column set or order changes.
inline constexpr int kOutputSchemaVersion = 1;

enum class Format { csv, json };

Format parse_format(const std::string& name);

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::string kind;  ///< e.g. "evaluate", "sensitivity"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Appends a row; throws std::logic_error if its width is wrong.
  void add(std::vector<Cell> row);
};

/// CSV: header then rows, with a leading schema_version column.
/// JSON: {"schema_version", "kind", "records": [{column: value}]}; NaN -> null.
void write_table(std::ostream& out, const Table& table, Format format);

/// Shortest round-trip decimal text of v ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

}  // namespace crsn::cli

#endif  // CRSN_CLI_REPORT_HPP
