#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "erange/cli/config.hpp"
#include "json.hpp"

namespace erange::cli {

struct Column {
  std::string key;
  std::string unit;  ///< empty for dimensionless or textual columns
};

/// A cell: number, integer, flag or text (sentinels such as "divergent" are text).
using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json diagnostics = nlohmann::json::object();

  void add(std::vector<Cell> row);
};

/// 17 significant digits, fixed "inf"/"nan" spellings.
std::string format_number(double x);

/// RFC 4180: header "key [unit]", one line per row, CRLF-free.
void write_csv(std::ostream& os, const Table& table);

/// {config, results: [ {key: value} ], diagnostics}.
void write_json(std::ostream& os, const Table& table, const RunConfig& config);

}  // namespace erange::cli
