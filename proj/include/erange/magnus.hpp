#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "erange/grid.hpp"

namespace erange {

/// y'' = f(r) y propagated node to node by a sixth-order Magnus step.
/// The step map has unit determinant, so Wronskians are carried exactly.
/// True values are y[i] * exp(log_scale[i]).
struct Propagation {
  std::vector<double> y;
  std::vector<double> yp;
  std::vector<double> log_scale;
  double max_local_error = 0.0;  ///< relative, from step doubling; 0 unless requested
};

struct PropagateOptions {
  bool estimate_error = false;
};

/// Propagates from node `from` to node `to` (either direction). Entries outside the
/// traversed range are left at zero.
Propagation propagate(const RadialGrid& grid, const std::function<double(double)>& f,
                      std::size_t from, std::size_t to, double y0, double yp0,
                      double log_scale0 = 0.0, PropagateOptions options = {});

/// Transfer matrix of one Magnus step over [r0, r0 + h] (h may be negative).
struct Step2x2 {
  double m00, m01, m10, m11;
};
Step2x2 magnus_step(const std::function<double(double)>& f, double r0, double h);

}  // namespace erange
