#pragma once

#include <optional>
#include <string>
#include <vector>

#include "erange/grid.hpp"
#include "erange/potential.hpp"
#include "json.hpp"

namespace erange::cli {

enum class Method { integral, matching, both };
enum class Format { csv, json };

std::string to_string(Method m);
std::string to_string(Format f);
Method parse_method(const std::string& text);
Format parse_format(const std::string& text);

struct KGrid {
  double k_min = 0.01;
  double k_max = 10.0;
  int points = 50;
  bool logarithmic = true;

  std::vector<double> values() const;
};

struct Tolerances {
  double phase_abs_error = 1e-14;      ///< absolute phase error assumed by the low-k fit
  double phase_rel_error = 1e-11;
  double contamination_limit = 1e-4;   ///< omitted k^4 term / k^2 term at the fit window edge
  double levinson_k_min = 1e-3;
  double levinson_residual = 0.05;
};

struct ScanSettings {
  std::vector<double> s_list{2.5, 3.5, 4.5, 6.0, 10.0};
  std::vector<int> ell_list{0, 1};
  double amplitude = 1.0;
  std::vector<double> R_values;  ///< empty selects the theorem ladder
};

struct RunConfig {
  nlohmann::json potential_node = {{"type", "square_barrier"}, {"height", 4.0}, {"radius", 1.0}};
  PotentialSpec potential = PotentialSpec::square_barrier(4.0, 1.0);
  int ell = 0;
  KGrid k_grid;
  bool k_grid_explicit = false;  ///< effective-range otherwise picks a low-k grid from the potential
  GridSpec grid;
  Method method = Method::both;
  Tolerances tolerances;
  ScanSettings scan;
  Format format = Format::csv;
  std::string out_path;  ///< empty writes to stdout
};

/// Reads a YAML run file on top of the defaults. Throws ConfigError naming the offending field.
RunConfig load_config(const std::string& path);

/// Builds a potential from a JSON description ({type: ..., parameters}).
PotentialSpec potential_from_json(const nlohmann::json& node);

/// Checks every invariant of a resolved config. Throws ConfigError.
void validate(const RunConfig& config);

/// The fully resolved config, for provenance in JSON output.
nlohmann::json to_json(const RunConfig& config);

}  // namespace erange::cli
