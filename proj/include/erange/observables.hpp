#pragma once

#include <optional>
#include <string>
#include <vector>

#include "erange/grid.hpp"
#include "erange/low_k_fit.hpp"
#include "erange/potential.hpp"
#include "erange/radial.hpp"
#include "erange/scans.hpp"

namespace erange {

enum class PhaseMethod { integral_formula, asymptotic_matching };
std::string to_string(PhaseMethod m);

struct PhaseShiftCurve {
  int ell = 0;
  std::vector<double> k_values;
  std::vector<double> delta;
  PhaseMethod method = PhaseMethod::asymptotic_matching;
  double max_adjacent_jump = 0.0;  ///< largest |delta(k_i+1) - delta(k_i)|
  bool branch_continuous = true;   ///< max_adjacent_jump < pi/2
};

/// -k int V phi^2 / [(u'phi - u phi')^2 + (v'phi - v phi')^2] over the grid plus a first-order
/// tail correction. Requires V >= 0 and k > 0.
double phase_shift_integral(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid);
double phase_shift_integral(const PotentialSpec& pot, double k, int ell);

/// Variable phase tan delta(r) = -(u'phi - u phi')/(v'phi - v phi') tracked along r from
/// delta(0) = 0, plus the same tail correction. Works for any sign of V.
double phase_shift_matching(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid);
double phase_shift_matching(const PotentialSpec& pot, double k, int ell);

/// First-order correction -1/k int_R^inf V (u cos d + v sin d)^2 for the tail beyond R.
double phase_tail_correction(const PotentialSpec& pot, double k, int ell, double R, double delta_R);

/// Phase shifts at every k, computed concurrently on a shared grid (ordered output).
PhaseShiftCurve phase_shift_curve(const PotentialSpec& pot, int ell, const std::vector<double>& k_values,
                                  PhaseMethod method);

/// A finite value or a divergence marker carrying its evidence.
struct Quantity {
  bool finite = true;
  bool undefined = false;  ///< not divergent, but not computable (e.g. a = 0)
  double value = 0.0;
  double predicted_exponent = 0.0;
  std::optional<ConvergenceScan> evidence;
  std::string note;

  static Quantity of(double v) { return Quantity{true, false, v, 0.0, std::nullopt, {}}; }
  static Quantity divergent(double exponent, std::string why) {
    return Quantity{false, false, 0.0, exponent, std::nullopt, std::move(why)};
  }
  static Quantity not_defined(std::string why) {
    return Quantity{false, true, 0.0, 0.0, std::nullopt, std::move(why)};
  }
};

struct ScatteringLengthResult {
  Quantity a;
  double integral_form = 0.0;   ///< int V phi0^2 / Dz^2 + tail
  double limit_form = 0.0;      ///< boundary form at r_max + tail
  double tail_correction = 0.0;
  double relative_disagreement = 0.0;
  double limit_condition = 1.0;      ///< cancellation factor in r phi' - (l+1) phi at r_max
  bool consistency_warning = false;  ///< forms differ by more than 1e-6 relative
};

/// a_l for V >= 0. Divergent marker with scan evidence when r^(2l+2) V is not integrable.
ScatteringLengthResult scattering_length(const PotentialSpec& pot, int ell, const RadialGrid& grid);
ScatteringLengthResult scattering_length(const PotentialSpec& pot, int ell = 0);

struct BCoefficientResult {
  Quantity b;
  double variable_phase_form = 0.0;  ///< grid part of the variable-phase integral
  double product_form = 0.0;         ///< l = 0: int V (phi^4 - 2 phi phi' int phi^2) / phi'^4
  double tail_correction = 0.0;
};

/// Coefficient b of the k^(2l+3) term of delta_l. Requires V >= 0 and finite a_l.
BCoefficientResult b_coefficient(const PotentialSpec& pot, int ell, const RadialGrid& grid);
BCoefficientResult b_coefficient(const PotentialSpec& pot, int ell = 0);

/// l = 0: 2a/3 - 2b/a^2. l >= 1: -2b/a^2. Throws DomainError for a = 0.
double effective_range(double a, double b, int ell = 0);

struct EffectiveRangeResult {
  int ell = 0;
  Quantity a;
  Quantity b;
  Quantity r_eff;
  std::string method;  ///< direct_integral or low_k_fit
  std::optional<LowKFit> fit;
  double a_consistency = 0.0;  ///< direct method: relative gap between the two a forms
};

/// a and b from the zero-energy integrals, r_eff from them.
EffectiveRangeResult direct_effective_range(const PotentialSpec& pot, int ell, const RadialGrid& grid);
EffectiveRangeResult direct_effective_range(const PotentialSpec& pot, int ell);

/// 64 log-spaced momenta from 1e-4 to 0.1 in units of the inverse range scale.
std::vector<double> default_low_k_grid(const PotentialSpec& pot);

/// Fit of k^(2l+1) cot delta on a k grid (matching phases; any sign of V).
/// ell, levinson_n and nonanalytic_power in options are overridden; the tolerances are kept.
EffectiveRangeResult low_k_expansion(const PotentialSpec& pot, int ell, const std::vector<double>& k_grid,
                                     LowKFitOptions options = {});
EffectiveRangeResult low_k_expansion(const PhaseShiftCurve& curve, int levinson_n,
                                     std::optional<double> nonanalytic_power, LowKFitOptions options = {});

/// Exponent p of the k^p term that the tail of pot adds to k^(2l+1) cot delta, if in (2, 4).
std::optional<double> nonanalytic_power(const PotentialSpec& pot, int ell);

struct LevinsonResult {
  int n = 0;
  int node_count = 0;
  double delta_at_kmin = 0.0;
  double residual = 0.0;
  double resonance_indicator = 1.0;  ///< 0 at a zero-energy resonance, 1 far from it
  bool resonance_flag = false;
  std::vector<double> gammas;
};

/// delta(k_min) - n pi with n from the bound-state count. Throws ResonanceError at a
/// zero-energy resonance.
LevinsonResult levinson(const PotentialSpec& pot, int ell, const RadialGrid& grid, double k_min = 1e-3);
LevinsonResult levinson(const PotentialSpec& pot, int ell, double k_min = 1e-3);

/// delta - 2 sum atan(gamma_j / k).
PhaseShiftCurve subtracted_phase(const PhaseShiftCurve& curve, const std::vector<double>& gammas);

struct BarredCoefficients {
  double a_bar = 0.0;
  double b_bar = 0.0;
};

/// a - 2 sum 1/gamma_j and b - (2/3) sum 1/gamma_j^3 for the subtracted phase.
BarredCoefficients barred_coefficients(double a, double b, const std::vector<double>& gammas);

/// max over the grid of |phi phi0' - phi0 phi' - k^2 int_0^r phi phi0| / (1 + k^2 int_0^r |phi phi0|).
/// The grid should resolve k (see phase_grid).
double identity_residual(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid);

/// Grid with a step suited to momenta up to k_max.
RadialGrid phase_grid(const PotentialSpec& pot, double k_max);

}  // namespace erange
