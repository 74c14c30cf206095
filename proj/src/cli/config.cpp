#include "erange/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "erange/errors.hpp"

namespace erange::cli {

using nlohmann::json;

std::string to_string(Method m) {
  switch (m) {
    case Method::integral: return "integral";
    case Method::matching: return "matching";
    case Method::both: return "both";
  }
  return "both";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Method parse_method(const std::string& text) {
  if (text == "integral") return Method::integral;
  if (text == "matching") return Method::matching;
  if (text == "both") return Method::both;
  throw ConfigError("method: expected integral, matching or both, got '" + text + "'");
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ConfigError("format: expected csv or json, got '" + text + "'");
}

std::vector<double> KGrid::values() const {
  std::vector<double> k(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    k[static_cast<std::size_t>(i)] =
        logarithmic ? k_min * std::pow(k_max / k_min, t) : k_min + (k_max - k_min) * t;
  }
  return k;
}

namespace {

json scalar_to_json(const std::string& s) {
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  double d = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, d);
  if (ec == std::errc() && ptr == end && !s.empty()) {
    long long i = 0;
    auto [ip, iec] = std::from_chars(s.data(), end, i);
    if (iec == std::errc() && ip == end) return i;
    return d;
  }
  return s;
}

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return scalar_to_json(node.Scalar());
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& item : node) a.push_back(yaml_to_json(item));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : node) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
  }
  return nullptr;
}

void reject_unknown(const json& node, const std::string& where, const std::set<std::string>& known) {
  for (const auto& [key, _] : node.items())
    if (!known.count(key)) throw ConfigError(where + key + ": unknown field");
}

double number(const json& node, const std::string& key, const std::string& where) {
  if (!node.contains(key)) throw ConfigError(where + key + ": missing");
  if (!node.at(key).is_number()) throw ConfigError(where + key + ": expected a number");
  return node.at(key).get<double>();
}

double number_or(const json& node, const std::string& key, const std::string& where, double fallback) {
  return node.contains(key) ? number(node, key, where) : fallback;
}

int integer(const json& node, const std::string& key, const std::string& where) {
  if (!node.at(key).is_number_integer()) throw ConfigError(where + key + ": expected an integer");
  return node.at(key).get<int>();
}

std::string text(const json& node, const std::string& key, const std::string& where) {
  if (!node.at(key).is_string()) throw ConfigError(where + key + ": expected a string");
  return node.at(key).get<std::string>();
}

std::vector<double> numbers(const json& node, const std::string& key, const std::string& where) {
  const json& a = node.at(key);
  if (!a.is_array()) throw ConfigError(where + key + ": expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ConfigError(where + key + ": expected a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

PotentialSpec potential_at(const json& node, const std::string& where) {
  if (!node.is_object()) throw ConfigError(where + ": expected a mapping");
  if (!node.contains("type")) throw ConfigError(where + ".type: missing");
  const std::string type = text(node, "type", where + ".");
  const std::string w = where + ".";
  try {
    if (type == "square_barrier") {
      reject_unknown(node, w, {"type", "height", "radius"});
      return PotentialSpec::square_barrier(number(node, "height", w), number_or(node, "radius", w, 1.0));
    }
    if (type == "square_well") {
      reject_unknown(node, w, {"type", "depth", "radius"});
      return PotentialSpec::square_well(number(node, "depth", w), number_or(node, "radius", w, 1.0));
    }
    if (type == "power_tail") {
      reject_unknown(node, w, {"type", "amplitude", "core", "exponent"});
      return PotentialSpec::power_tail(number_or(node, "amplitude", w, 1.0), number_or(node, "core", w, 1.0),
                                       number(node, "exponent", w));
    }
    if (type == "exponential_tail") {
      reject_unknown(node, w, {"type", "amplitude", "rate"});
      return PotentialSpec::exponential_tail(number_or(node, "amplitude", w, 1.0), number_or(node, "rate", w, 1.0));
    }
    if (type == "tabulated") {
      reject_unknown(node, w, {"type", "nodes", "values", "tail", "tail_exponent"});
      TailKind tail = TailKind::unspecified;
      if (node.contains("tail")) {
        const std::string t = text(node, "tail", w);
        if (t == "compact") tail = TailKind::compact;
        else if (t == "power") tail = TailKind::power;
        else if (t != "unspecified") throw ConfigError(w + "tail: expected compact, power or unspecified");
      }
      return PotentialSpec::tabulated(numbers(node, "nodes", w), numbers(node, "values", w), tail,
                                      number_or(node, "tail_exponent", w, 0.0));
    }
    if (type == "truncated") {
      reject_unknown(node, w, {"type", "inner", "cutoff"});
      if (!node.contains("inner")) throw ConfigError(w + "inner: missing");
      return PotentialSpec::truncated(potential_at(node.at("inner"), w + "inner"), number(node, "cutoff", w));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(w + "type: unknown potential '" + type + "'");
}

}  // namespace

PotentialSpec potential_from_json(const json& node) { return potential_at(node, "potential"); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  json root;
  try {
    root = yaml_to_json(YAML::Load(in));
  } catch (const YAML::Exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  RunConfig c;
  if (root.is_null()) return c;
  if (!root.is_object()) throw ConfigError("config: expected a mapping at the top level");
  reject_unknown(root, "", {"potential", "ell", "k_grid", "grid", "method", "tolerances", "scan", "output"});

  if (root.contains("potential")) {
    c.potential = potential_from_json(root.at("potential"));
    c.potential_node = root.at("potential");
  }
  if (root.contains("ell")) c.ell = integer(root, "ell", "");
  if (root.contains("method")) c.method = parse_method(text(root, "method", ""));

  if (root.contains("k_grid")) {
    const json& k = root.at("k_grid");
    const std::string w = "k_grid.";
    reject_unknown(k, w, {"k_min", "k_max", "points", "spacing"});
    c.k_grid_explicit = true;
    c.k_grid.k_min = number_or(k, "k_min", w, c.k_grid.k_min);
    c.k_grid.k_max = number_or(k, "k_max", w, c.k_grid.k_max);
    if (k.contains("points")) c.k_grid.points = integer(k, "points", w);
    if (k.contains("spacing")) {
      const std::string s = text(k, "spacing", w);
      if (s != "log" && s != "linear") throw ConfigError(w + "spacing: expected linear or log");
      c.k_grid.logarithmic = s == "log";
    }
  }
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    const std::string w = "grid.";
    reject_unknown(g, w, {"r_min", "r_max", "points_per_decade"});
    c.grid.r_min = number_or(g, "r_min", w, c.grid.r_min);
    c.grid.r_max = number_or(g, "r_max", w, c.grid.r_max);
    if (g.contains("points_per_decade")) c.grid.points_per_decade = integer(g, "points_per_decade", w);
  }
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    const std::string w = "tolerances.";
    reject_unknown(t, w, {"phase_abs_error", "phase_rel_error", "contamination_limit", "levinson_k_min",
                          "levinson_residual"});
    auto& tol = c.tolerances;
    tol.phase_abs_error = number_or(t, "phase_abs_error", w, tol.phase_abs_error);
    tol.phase_rel_error = number_or(t, "phase_rel_error", w, tol.phase_rel_error);
    tol.contamination_limit = number_or(t, "contamination_limit", w, tol.contamination_limit);
    tol.levinson_k_min = number_or(t, "levinson_k_min", w, tol.levinson_k_min);
    tol.levinson_residual = number_or(t, "levinson_residual", w, tol.levinson_residual);
  }
  if (root.contains("scan")) {
    const json& s = root.at("scan");
    const std::string w = "scan.";
    reject_unknown(s, w, {"s_list", "ell_list", "amplitude", "R_values"});
    if (s.contains("s_list")) c.scan.s_list = numbers(s, "s_list", w);
    if (s.contains("ell_list")) {
      c.scan.ell_list.clear();
      for (double x : numbers(s, "ell_list", w)) {
        if (x != std::floor(x)) throw ConfigError(w + "ell_list: expected integers");
        c.scan.ell_list.push_back(static_cast<int>(x));
      }
    }
    c.scan.amplitude = number_or(s, "amplitude", w, c.scan.amplitude);
    if (s.contains("R_values")) c.scan.R_values = numbers(s, "R_values", w);
  }
  if (root.contains("output")) {
    const json& o = root.at("output");
    reject_unknown(o, "output.", {"format", "path"});
    if (o.contains("format")) c.format = parse_format(text(o, "format", "output."));
    if (o.contains("path")) c.out_path = text(o, "path", "output.");
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.ell < 0 || c.ell > 10) throw ConfigError("ell: must be in 0..10");
  if (!(c.k_grid.k_min > 0.0)) throw ConfigError("k_grid.k_min: must be positive");
  if (!(c.k_grid.k_max >= c.k_grid.k_min)) throw ConfigError("k_grid.k_max: must be at least k_min");
  if (c.k_grid.points < 1) throw ConfigError("k_grid.points: must be at least 1");
  if (!(c.grid.r_min > 0.0)) throw ConfigError("grid.r_min: must be positive");
  if (!(c.grid.r_max >= 0.0)) throw ConfigError("grid.r_max: must be non-negative (0 selects a default)");
  if (c.grid.r_max > 0.0 && !(c.grid.r_max > c.grid.r_min)) throw ConfigError("grid.r_max: must exceed r_min");
  if (c.grid.points_per_decade < 16) throw ConfigError("grid.points_per_decade: must be at least 16");
  const auto& t = c.tolerances;
  for (auto [name, v] : {std::pair{"phase_abs_error", t.phase_abs_error}, {"phase_rel_error", t.phase_rel_error},
                         {"contamination_limit", t.contamination_limit}, {"levinson_k_min", t.levinson_k_min},
                         {"levinson_residual", t.levinson_residual}})
    if (!(v > 0.0)) throw ConfigError(std::string("tolerances.") + name + ": must be positive");
  if (c.scan.s_list.empty()) throw ConfigError("scan.s_list: must not be empty");
  if (c.scan.ell_list.empty()) throw ConfigError("scan.ell_list: must not be empty");
  for (double s : c.scan.s_list)
    if (!(s > 2.0)) throw ConfigError("scan.s_list: exponents must exceed 2");
  for (int l : c.scan.ell_list)
    if (l < 0 || l > 10) throw ConfigError("scan.ell_list: values must be in 0..10");
  if (!(c.scan.amplitude > 0.0)) throw ConfigError("scan.amplitude: must be positive");
}

json to_json(const RunConfig& c) {
  json j;
  j["potential"] = c.potential_node;
  j["potential_resolved"] = c.potential.describe();
  j["ell"] = c.ell;
  j["k_grid"] = {{"k_min", c.k_grid.k_min},
                 {"k_max", c.k_grid.k_max},
                 {"points", c.k_grid.points},
                 {"spacing", c.k_grid.logarithmic ? "log" : "linear"},
                 {"explicit", c.k_grid_explicit}};
  j["grid"] = {{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"points_per_decade", c.grid.points_per_decade}};
  j["method"] = to_string(c.method);
  j["tolerances"] = {{"phase_abs_error", c.tolerances.phase_abs_error},
                     {"phase_rel_error", c.tolerances.phase_rel_error},
                     {"contamination_limit", c.tolerances.contamination_limit},
                     {"levinson_k_min", c.tolerances.levinson_k_min},
                     {"levinson_residual", c.tolerances.levinson_residual}};
  j["scan"] = {{"s_list", c.scan.s_list},
               {"ell_list", c.scan.ell_list},
               {"amplitude", c.scan.amplitude},
               {"R_values", c.scan.R_values}};
  j["output"] = {{"format", to_string(c.format)}, {"path", c.out_path}};
  return j;
}

}  // namespace erange::cli
