#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace dicke::cli {

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

/// Column-named table. Trajectory outputs use the long layout
/// (time, series, value); sweeps use their own columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  static Table long_format() { return Table{{"time", "series", "value"}, {}}; }
  void add(double time, const std::string& series, double value) {
    rows.push_back({time, series, value});
  }
};

/// CSV with CRLF line endings; strings quoted only when needed.
void write_csv(std::ostream& os, const Table& t);

/// {"columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& os, const Table& t);

/// Writes `t` in `format` to `path`, or to `fallback` when path is empty.
void write_table(const Table& t, const std::string& path,
                 const std::string& format, std::ostream& fallback);

void write_sidecar(const std::string& path, const nlohmann::ordered_json& cfg);

}  // namespace dicke::cli
