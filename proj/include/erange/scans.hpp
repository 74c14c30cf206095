#pragma once

#include <string>
#include <vector>

#include "erange/potential.hpp"

namespace erange {

enum class ScanQuantity { a, r_eff };
enum class Verdict { convergent, divergent };

std::string to_string(ScanQuantity q);
std::string to_string(Verdict v);

struct ConvergenceScan {
  ScanQuantity quantity = ScanQuantity::a;
  int ell = 0;
  std::vector<double> R_values;
  std::vector<double> values;
  double growth_exponent = 0.0;     ///< p in value ~ R^p from the upper half of the ladder; 0 if convergent
  double increment_exponent = 0.0;  ///< slope of log|increment| against log R over the whole ladder
  double last_relative_increment = 0.0;
  Verdict verdict = Verdict::convergent;
  double predicted_exponent = 0.0;  ///< 2l+3-s for a, 2l+5-s for r_eff (power tails)
  bool near_threshold = false;
};

/// R in {10, 20, 40, 80, 160, 320}.
std::vector<double> default_scan_ladder();
/// R = 10 * 2^j up to 10240; long enough for exponents to settle within 0.05.
std::vector<double> theorem_scan_ladder();

/// Computes the observable for TruncatedAt(pot, R) at every cutoff and classifies the growth.
/// Requires V >= 0, a geometric ladder with ratio >= 1.5 and at least 6 points.
/// r_eff on a potential whose a is predicted divergent throws PreconditionError.
ConvergenceScan truncation_scan(const PotentialSpec& pot, ScanQuantity quantity, int ell,
                                const std::vector<double>& R_values);

struct TheoremCell {
  int ell = 0;
  double s = 0.0;
  bool predicted_a = false;
  bool predicted_r = false;
  ConvergenceScan scan_a;
  bool r_scanned = false;  ///< false when a diverges and r_eff is undefined
  ConvergenceScan scan_r;
  bool observed_a = false;
  bool observed_r = false;
  bool near_threshold = false;
  bool exponent_checked = false;
  bool exponents_ok = true;
  bool matches = false;
};

struct TheoremMatrix {
  std::vector<TheoremCell> cells;  ///< ordered by (l, s) as given
  bool passed = false;             ///< every non-flagged cell matches
};

/// Scans PowerTail{amplitude, 1, s} for every (l, s); cells run concurrently.
TheoremMatrix theorem_matrix(const std::vector<int>& ell_values, const std::vector<double>& s_values,
                             double amplitude = 1.0,
                             const std::vector<double>& R_values = theorem_scan_ladder());

}  // namespace erange
