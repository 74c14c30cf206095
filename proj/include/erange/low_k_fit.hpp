#pragma once

#include <optional>
#include <vector>

namespace erange {

struct LowKFitOptions {
  int ell = 0;
  int levinson_n = 0;                       ///< n pi subtracted before fitting
  std::optional<double> nonanalytic_power;  ///< extra k^p term when 2 < p < 4
  double contamination_limit = 1e-4;        ///< omitted term / k^2 term at the window edge
  double phase_abs_error = 1e-14;
  double phase_rel_error = 1e-11;
};

struct LowKFit {
  double intercept = 0.0;  ///< -1/a
  double slope = 0.0;      ///< r/2
  double nonanalytic = 0.0;
  double window_k_max = 0.0;
  int points_used = 0;
  int points_dropped = 0;
  double relative_residual = 0.0;  ///< weighted rms residual / |intercept|
  double condition_number = 0.0;
  double contamination = 0.0;      ///< pilot estimate at window_k_max
};

/// Weighted least squares of k^(2l+1) cot(delta - n pi) on {1, k^2[, k^p]} over a window
/// chosen by a pilot fit that includes the next omitted term.
/// Throws PreconditionError when fewer than 4 usable points remain.
LowKFit fit_effective_range(const std::vector<double>& k, const std::vector<double>& delta,
                            const LowKFitOptions& options);

}  // namespace erange
