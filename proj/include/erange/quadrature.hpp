#pragma once

#include <vector>

#include "erange/grid.hpp"

namespace erange {

/// Integrand samples on a grid. segment_end[s] overrides values[last] for segment s,
/// carrying left limits across discontinuities. Empty segment_end means continuous.
struct SampledFunction {
  std::vector<double> values;
  std::vector<double> segment_end;

  double end_value(const RadialGrid& grid, std::size_t s) const {
    return segment_end.empty() ? values[grid.segments()[s].last] : segment_end[s];
  }
};

/// g(i) * V at every node, with the left limit of V at segment ends.
SampledFunction times_potential(const PotentialSamples& v, const std::vector<double>& g,
                                const RadialGrid& grid);

/// Composite Boole rule over [r_min, r_max]; in ln r on logarithmic segments.
double integrate(const RadialGrid& grid, const SampledFunction& f);
double integrate(const RadialGrid& grid, const std::vector<double>& f);

/// Running integral from r_min to every node (6-point interpolatory panels).
std::vector<double> cumulative(const RadialGrid& grid, const SampledFunction& f);
std::vector<double> cumulative(const RadialGrid& grid, const std::vector<double>& f);

}  // namespace erange
