#include "erange/low_k_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "erange/errors.hpp"

namespace erange {

namespace {

struct Point {
  double k, y, w;
};

struct Solved {
  Eigen::VectorXd c;
  double rms = 0.0;
  double cond = 0.0;
};

Solved solve(const std::vector<Point>& pts, const std::vector<double>& powers) {
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index m = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sw = std::sqrt(pts[i].w);
    for (Eigen::Index j = 0; j < m; ++j) A(i, j) = sw * std::pow(pts[i].k, powers[j]);
    b(i) = sw * pts[i].y;
  }
  // Column scaling keeps the condition number meaningful across powers of k.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < m; ++j) A.col(j) /= scale(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Solved s;
  s.c = svd.solve(b).cwiseQuotient(scale);
  const auto& sv = svd.singularValues();
  s.cond = sv(0) / sv(sv.size() - 1);
  Eigen::VectorXd r = A * svd.solve(b) - b;
  double wsum = 0.0;
  for (const auto& p : pts) wsum += p.w;
  s.rms = std::sqrt(r.squaredNorm() / wsum);
  return s;
}

}  // namespace

LowKFit fit_effective_range(const std::vector<double>& k, const std::vector<double>& delta,
                            const LowKFitOptions& options) {
  if (k.size() != delta.size()) throw PreconditionError("k and delta sizes differ");
  const int l = options.ell;
  std::vector<Point> all;
  int dropped = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = delta[i] - options.levinson_n * std::numbers::pi;
    const double s = std::sin(d);
    // Below this |sin d| the absolute phase error swamps k cot d.
    if (!(k[i] > 0.0) || std::abs(s) < 100.0 * options.phase_abs_error) {
      ++dropped;
      continue;
    }
    const double kl = std::pow(k[i], 2 * l + 1);
    const double y = kl * std::cos(d) / s;
    const double sigma_d = options.phase_abs_error + options.phase_rel_error * std::abs(d);
    const double sigma_y = kl * sigma_d / (s * s);
    all.push_back({k[i], y, 1.0 / (sigma_y * sigma_y)});
  }
  std::sort(all.begin(), all.end(), [](const Point& a, const Point& b) { return a.k < b.k; });
  if (all.size() < 4) throw PreconditionError("fewer than 4 usable points for the low-k fit");

  std::vector<double> base{0.0, 2.0};
  const bool nonanalytic = options.nonanalytic_power && *options.nonanalytic_power > 2.0 &&
                           *options.nonanalytic_power < 4.0;
  if (nonanalytic) base.push_back(*options.nonanalytic_power);
  std::vector<double> pilot = base;
  pilot.push_back(4.0);
  const double next_power = 4.0;
  const double leading_power = 2.0;

  // Pilot on everything, then once more on the first window, to place the window edge.
  double k_edge = all.back().k;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<Point> win;
    for (const auto& p : all)
      if (p.k <= k_edge * (1.0 + 1e-12)) win.push_back(p);
    if (win.size() < pilot.size() + 2) break;
    const Solved sp = solve(win, pilot);
    const double c_lead = sp.c(1);
    const double c_next = sp.c(static_cast<Eigen::Index>(pilot.size()) - 1);
    if (c_next == 0.0 || c_lead == 0.0) break;
    // |c_next| k^4 < limit * |c_2| k^2
    const double edge = std::pow(options.contamination_limit * std::abs(c_lead / c_next),
                                 1.0 / (next_power - leading_power));
    k_edge = std::min(k_edge, edge);
  }

  std::vector<Point> win;
  for (const auto& p : all)
    if (p.k <= k_edge * (1.0 + 1e-12)) win.push_back(p);
  if (win.size() < 4)
    throw PreconditionError("fewer than 4 k points below the fit window edge k = " + std::to_string(k_edge) +
                            "; extend the k grid to lower momenta");

  const Solved s = solve(win, base);
  LowKFit fit;
  fit.intercept = s.c(0);
  fit.slope = s.c(1);
  fit.nonanalytic = nonanalytic ? s.c(2) : 0.0;
  fit.window_k_max = win.back().k;
  fit.points_used = static_cast<int>(win.size());
  fit.points_dropped = dropped;
  fit.relative_residual = s.rms / std::abs(fit.intercept);
  fit.condition_number = s.cond;
  {
    const Solved sp = solve(win.size() >= pilot.size() + 1 ? win : all, pilot);
    const double c_lead = sp.c(1);
    const double kk = fit.window_k_max;
    const double denom = std::abs(c_lead) * std::pow(kk, leading_power);
    fit.contamination =
        denom > 0.0 ? std::abs(sp.c(static_cast<Eigen::Index>(pilot.size()) - 1)) * std::pow(kk, 4.0) / denom : 0.0;
  }
  return fit;
}

}  // namespace erange
