#pragma once

#include <cstddef>
#include <vector>

#include "erange/grid.hpp"
#include "erange/potential.hpp"

namespace erange {

enum class Normalization {
  regular_origin,    ///< phi ~ r^(l+1) / (2l+1)!! at the origin
  bounded_infinity,  ///< r^l phi -> 1 at infinity (zero energy)
  growing_infinity,  ///< phi ~ r^(l+1) + B r^(-l) at infinity (zero energy)
};

/// Sampled solution of phi'' = (V + l(l+1)/r^2 - E) phi.
/// Stored as mantissas with a per-node log scale: phi(r_i) = phi[i] * exp(log_scale[i]).
struct RadialSolution {
  RadialGrid grid;
  double k = 0.0;
  double energy = 0.0;
  int ell = 0;
  std::vector<double> phi;
  std::vector<double> phi_prime;
  std::vector<double> log_scale;
  Normalization normalization = Normalization::regular_origin;
  double max_local_error = 0.0;

  std::size_t size() const noexcept { return phi.size(); }
  /// Unscaled values; may overflow to inf for strongly growing solutions.
  double value(std::size_t i) const;
  double derivative(std::size_t i) const;
};

struct SolverOptions {
  bool estimate_error = true;
};

RadialSolution solve_regular(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid,
                             SolverOptions options = {});

/// Regular solution at arbitrary energy (negative for bound-state searches).
RadialSolution solve_regular_energy(const PotentialSpec& pot, double energy, int ell,
                                    const RadialGrid& grid, SolverOptions options = {});

struct VolterraOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;
};

/// Zero-energy regular solution by fixed-point iteration of the Volterra equation.
/// Throws IterationError when the iteration does not settle.
RadialSolution solve_zero_regular_volterra(const PotentialSpec& pot, int ell, const RadialGrid& grid,
                                           VolterraOptions options = {});

/// Zero-energy solution bounded at infinity, integrated inward from r_max with a Born start.
/// Throws PreconditionError when the tail beyond r_max is not negligible.
RadialSolution solve_zero_bounded(const PotentialSpec& pot, int ell, const RadialGrid& grid);

/// Growing/decaying amplitudes of a zero-energy solution at node i:
/// phi = A r^(l+1) + B r^(-l) locally outside the potential.
struct ZeroEnergyAmplitudes {
  double growing = 0.0;   ///< A, in units of exp(log_scale)
  double decaying = 0.0;  ///< B
  double log_scale = 0.0;
};
ZeroEnergyAmplitudes zero_energy_amplitudes(const RadialSolution& sol, std::size_t i);

/// Rescales a zero-energy regular solution so that phi ~ r^(l+1) at r_max.
RadialSolution normalize_at_infinity(const RadialSolution& regular_zero);

struct WronskianResult {
  double median = 0.0;
  double max_deviation = 0.0;  ///< max |W_i - median|
  std::vector<double> values;
};

/// a' b - a b' at every node. Throws PreconditionError on mismatched grids, l or energy.
WronskianResult wronskian(const RadialSolution& a, const RadialSolution& b);

/// Strict sign changes of phi on (r_min, r_max), confirmed on a Hermite refinement of each interval.
int count_nodes(const RadialSolution& sol);

/// Zero-energy node count including the node of A r^(l+1) + B r^(-l) beyond r_max, if any.
/// Exact when V vanishes beyond r_max; the bound-state count for a regular solution.
int count_zero_energy_nodes(const RadialSolution& sol);

struct BoundStateSpectrum {
  std::vector<double> gammas;  ///< descending
  int node_count = 0;
};

/// All bound states -gamma^2 for angular momentum l. Throws ConsistencyError when the number
/// of roots found disagrees with the node count of the zero-energy solution.
BoundStateSpectrum bound_states(const PotentialSpec& pot, int ell, const RadialGrid& grid);

/// Normalised matching function whose zeros in gamma are the bound states.
double bound_state_mismatch(const PotentialSpec& pot, int ell, const RadialGrid& grid, double gamma);

/// l = 0 zero-energy slope diagnostics for phi normalised to phi'(0) = 1.
struct ZeroEnergySlope {
  double slope_at_rmax = 0.0;     ///< phi0'(r_max) from the ODE
  double volterra_slope = 0.0;    ///< 1 + int V phi0
  double first_moment = 0.0;      ///< int r V phi0
};
ZeroEnergySlope zero_energy_slope(const PotentialSpec& pot, const RadialGrid& grid);

}  // namespace erange
