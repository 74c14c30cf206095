#include "erange/scans.hpp"

#include <cmath>
#include <limits>

#include "erange/errors.hpp"
#include "erange/grid.hpp"
#include "erange/observables.hpp"
#include "erange/parallel.hpp"

namespace erange {

std::string to_string(ScanQuantity q) { return q == ScanQuantity::a ? "a" : "r_eff"; }
std::string to_string(Verdict v) { return v == Verdict::convergent ? "convergent" : "divergent"; }

std::vector<double> default_scan_ladder() { return {10.0, 20.0, 40.0, 80.0, 160.0, 320.0}; }

std::vector<double> theorem_scan_ladder() {
  std::vector<double> R;
  for (double r = 10.0; r <= 10240.0; r *= 2.0) R.push_back(r);
  return R;
}

namespace {

constexpr double kNoise = 1e-12;
constexpr double kNearThreshold = 0.25;
constexpr double kExponentMargin = 0.5;
constexpr double kExponentTolerance = 0.1;

// Slope of log|increment| against log R over increments [first, end) above the noise floor.
double increment_slope(ConvergenceScan& scan, std::size_t first) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = first; i + 1 < scan.values.size(); ++i) {
    const double inc = scan.values[i + 1] - scan.values[i];
    const double rel = std::abs(inc) / std::max(std::abs(scan.values[i + 1]), 1e-300);
    scan.last_relative_increment = rel;
    if (rel < kNoise || inc == 0.0) continue;
    const double x = 0.5 * (std::log(scan.R_values[i]) + std::log(scan.R_values[i + 1]));
    const double y = std::log(std::abs(inc));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return -std::numeric_limits<double>::infinity();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void check_ladder(const std::vector<double>& R) {
  if (R.size() < 6) throw PreconditionError("a truncation scan needs at least 6 cutoffs");
  const double ratio = R[1] / R[0];
  if (!(R[0] > 0.0) || !(ratio >= 1.5)) throw PreconditionError("cutoff ratio must be at least 1.5");
  for (std::size_t i = 2; i < R.size(); ++i)
    if (std::abs(R[i] / R[i - 1] - ratio) > 1e-9 * ratio)
      throw PreconditionError("cutoffs must form a geometric sequence");
}

double observable(const PotentialSpec& truncated, ScanQuantity q, int ell) {
  const RadialGrid grid = make_grid(truncated);
  const ScatteringLengthResult sl = scattering_length(truncated, ell, grid);
  if (q == ScanQuantity::a) return sl.a.value;
  const BCoefficientResult bc = b_coefficient(truncated, ell, grid);
  return effective_range(sl.a.value, bc.b.value, ell);
}

}  // namespace

ConvergenceScan truncation_scan(const PotentialSpec& pot, ScanQuantity quantity, int ell,
                                const std::vector<double>& R_values) {
  check_ladder(R_values);
  if (!is_nonnegative(pot)) throw PreconditionError("truncation scans use the direct integrals and need V >= 0");
  double s = std::numeric_limits<double>::infinity();
  try {
    s = tail_exponent(pot);
    if (quantity == ScanQuantity::r_eff && !predict_finiteness(pot, ell).a_finite)
      throw PreconditionError("r_eff is undefined when the scattering length diverges");
  } catch (const IndeterminateError&) {
  }

  ConvergenceScan scan;
  scan.quantity = quantity;
  scan.ell = ell;
  scan.R_values = R_values;
  const double threshold = quantity == ScanQuantity::a ? 2.0 * ell + 3.0 : 2.0 * ell + 5.0;
  scan.predicted_exponent = std::isfinite(s) ? threshold - s : -std::numeric_limits<double>::infinity();
  scan.near_threshold = std::isfinite(s) && std::abs(s - threshold) < kNearThreshold;

  scan.values.resize(R_values.size());
  for (std::size_t i = 0; i < R_values.size(); ++i)
    scan.values[i] = observable(PotentialSpec::truncated(pot, R_values[i]), quantity, ell);

  scan.increment_exponent = increment_slope(scan, 0);
  scan.verdict = scan.increment_exponent > 0.0 ? Verdict::divergent : Verdict::convergent;
  if (scan.verdict == Verdict::divergent) {
    // Pre-asymptotic corrections decay slowly; the exponent comes from the upper half of the ladder.
    const std::size_t m = scan.values.size() - 1;
    const double upper = increment_slope(scan, std::min(m / 2, m - 3));
    scan.growth_exponent = std::isfinite(upper) ? upper : scan.increment_exponent;
  }
  return scan;
}

TheoremMatrix theorem_matrix(const std::vector<int>& ell_values, const std::vector<double>& s_values,
                             double amplitude, const std::vector<double>& R_values) {
  for (double s : s_values)
    if (!(s > 2.0)) throw DomainError("tail exponents must exceed 2");
  if (!(amplitude > 0.0)) throw DomainError("scans need a positive (repulsive) amplitude");
  TheoremMatrix out;
  for (int l : ell_values)
    for (double s : s_values) {
      TheoremCell c;
      c.ell = l;
      c.s = s;
      out.cells.push_back(c);
    }

  parallel_for(out.cells.size(), [&](std::size_t i) {
    TheoremCell& c = out.cells[i];
    const PotentialSpec pot = PotentialSpec::power_tail(amplitude, 1.0, c.s);
    const Finiteness fin = predict_finiteness(pot, c.ell);
    c.predicted_a = fin.a_finite;
    c.predicted_r = fin.r_finite;
    c.scan_a = truncation_scan(pot, ScanQuantity::a, c.ell, R_values);
    c.observed_a = c.scan_a.verdict == Verdict::convergent;
    if (c.observed_a && c.predicted_a) {
      c.scan_r = truncation_scan(pot, ScanQuantity::r_eff, c.ell, R_values);
      c.r_scanned = true;
      c.observed_r = c.scan_r.verdict == Verdict::convergent;
    } else {
      c.observed_r = false;
    }
    const double ta = 2.0 * c.ell + 3.0, tr = 2.0 * c.ell + 5.0;
    c.near_threshold = std::abs(c.s - ta) < kNearThreshold || std::abs(c.s - tr) < kNearThreshold;
    auto check = [&](const ConvergenceScan& sc, double threshold) {
      if (sc.verdict != Verdict::divergent || std::abs(c.s - threshold) < kExponentMargin) return;
      c.exponent_checked = true;
      if (std::abs(sc.growth_exponent - sc.predicted_exponent) > kExponentTolerance) c.exponents_ok = false;
    };
    check(c.scan_a, ta);
    if (c.r_scanned) check(c.scan_r, tr);
    c.matches = c.predicted_a == c.observed_a && c.predicted_r == c.observed_r && c.exponents_ok;
  });

  out.passed = true;
  for (const auto& c : out.cells)
    if (!c.near_threshold && !c.matches) out.passed = false;
  return out;
}

}  // namespace erange
