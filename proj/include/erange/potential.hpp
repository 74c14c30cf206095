#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace erange {

// Units throughout: hbar^2 / 2m = 1, so energies are k^2 and V has units of 1/length^2.

struct SquareBarrier {
  double height = 0.0;
  double radius = 1.0;
};

struct SquareWell {
  double depth = 0.0;
  double radius = 1.0;
};

/// V(r) = amplitude * (core + r)^(-exponent)
struct PowerTail {
  double amplitude = 1.0;
  double core = 1.0;
  double exponent = 4.0;
};

/// V(r) = amplitude * exp(-rate * r)
struct ExponentialTail {
  double amplitude = 1.0;
  double rate = 1.0;
};

/// What is known about a tabulated potential beyond its last node.
enum class TailKind {
  unspecified,  ///< zero beyond the data, but nothing is claimed about the physical tail
  compact,      ///< the potential genuinely vanishes beyond the last node
  power,        ///< V(r) = V_last * (r / r_last)^(-tail_exponent)
};

struct Tabulated {
  std::vector<double> nodes;
  std::vector<double> values;
  TailKind tail = TailKind::unspecified;
  double tail_exponent = 0.0;
};

class PotentialSpec;

struct TruncatedAt {
  std::shared_ptr<const PotentialSpec> inner;
  double cutoff_radius = 0.0;
};

/// A central potential model with enough analytic tail metadata to decide
/// integrability questions exactly. Immutable once constructed.
class PotentialSpec {
 public:
  using Model =
      std::variant<SquareBarrier, SquareWell, PowerTail, ExponentialTail, Tabulated, TruncatedAt>;

  /// Validates the model; throws DomainError when r V(r) is not in L1(0, inf).
  explicit PotentialSpec(Model model);

  static PotentialSpec square_barrier(double height, double radius);
  static PotentialSpec square_well(double depth, double radius);
  static PotentialSpec power_tail(double amplitude, double core, double exponent);
  static PotentialSpec exponential_tail(double amplitude, double rate);
  static PotentialSpec tabulated(std::vector<double> nodes, std::vector<double> values,
                                 TailKind tail = TailKind::unspecified,
                                 double tail_exponent = 0.0);
  static PotentialSpec truncated(const PotentialSpec& inner, double cutoff_radius);
  static PotentialSpec free() { return square_barrier(0.0, 1.0); }

  const Model& model() const noexcept { return model_; }

  /// V(r) for r >= 0 without argument checks; right-continuous at steps.
  double operator()(double r) const noexcept;

  std::string describe() const;

 private:
  Model model_;
};

/// V(r). Throws DomainError for r < 0.
double evaluate(const PotentialSpec& spec, double r);

/// V(r-), the left limit; differs from evaluate() only at discontinuities.
double evaluate_left(const PotentialSpec& spec, double r);

/// True iff r^p V(r) is in L1(0, inf), decided from the model. p in 1..6.
/// Tabulated data with TailKind::unspecified throws IndeterminateError.
bool integrability_class(const PotentialSpec& spec, int p);

struct Finiteness {
  bool a_finite = false;
  bool r_finite = false;
};

/// Finite scattering length iff r^(2l+2) V in L1; finite effective range iff r^(2l+4) V in L1.
Finiteness predict_finiteness(const PotentialSpec& spec, int ell);

/// A radius R such that V keeps one sign (or vanishes) on (R, inf).
double sign_constant_beyond(const PotentialSpec& spec);

/// Radii where V is discontinuous (or has a kink worth placing a node on).
std::vector<double> breakpoints(const PotentialSpec& spec);

/// Characteristic length of the potential (radius, core, 1/rate, ...).
double range_scale(const PotentialSpec& spec);

/// Radius beyond which V is identically zero, if any.
std::optional<double> support_radius(const PotentialSpec& spec);

/// Decay exponent s of the tail (V ~ r^-s); +inf for compact or exponential tails.
/// Throws IndeterminateError for tabulated data without tail metadata.
double tail_exponent(const PotentialSpec& spec);

bool is_nonnegative(const PotentialSpec& spec);

/// Largest |V| on [a, b], estimated by dense sampling (exact for the step models).
double max_abs_on(const PotentialSpec& spec, double a, double b);

/// Integral of V(r) w(r) over [from, inf). Uses the exact zero beyond the support when known.
double tail_integral(const PotentialSpec& spec, double from,
                     const std::function<double(double)>& weight);

/// Integral of r^p |V(r)| over [from, inf).
double tail_moment_abs(const PotentialSpec& spec, double from, double p);

/// Smallest radius R (within a factor 1.01) with integral_R^inf r |V| dr < tolerance.
double tail_radius(const PotentialSpec& spec, double tolerance);

}  // namespace erange
