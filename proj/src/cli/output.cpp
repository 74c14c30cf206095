#include "erange/cli/output.hpp"

#include <cmath>
#include <cstdio>

#include "erange/errors.hpp"

namespace erange::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw NumericError("internal: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_number(v);
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    const Column& c = table.columns[j];
    os << (j ? "," : "") << quote(c.unit.empty() ? c.key : c.key + " [" + c.unit + "]");
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << quote(cell_text(row[j]));
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& table, const RunConfig& config) {
  nlohmann::json doc;
  doc["config"] = to_json(config);
  nlohmann::json results = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t j = 0; j < row.size(); ++j) r[table.columns[j].key] = cell_json(row[j]);
    results.push_back(std::move(r));
  }
  doc["results"] = std::move(results);
  nlohmann::json units = nlohmann::json::object();
  for (const auto& c : table.columns)
    if (!c.unit.empty()) units[c.key] = c.unit;
  doc["diagnostics"] = table.diagnostics;
  doc["diagnostics"]["units"] = units;
  os << doc.dump(2) << '\n';
}

}  // namespace erange::cli
