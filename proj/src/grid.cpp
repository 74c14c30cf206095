#include "erange/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erange/errors.hpp"

namespace erange {

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<Segment> segments)
    : nodes_(std::move(nodes)), segments_(std::move(segments)) {
  if (nodes_.size() < 5) throw DomainError("radial grid needs at least 5 nodes");
  if (!(nodes_.front() > 0.0)) throw DomainError("radial grid must start at r_min > 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw DomainError("radial grid nodes must increase strictly");
}

std::size_t RadialGrid::locate(double r) const {
  if (r <= nodes_.front()) return 0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

double default_r_max(const PotentialSpec& pot) {
  const double scale = range_scale(pot);
  if (const auto support = support_radius(pot)) return std::max(*support * 1.5, *support + 4.0 * scale);
  double tail = 1e4 * scale;
  try {
    tail = std::min(tail, tail_radius(pot, 1e-11));
  } catch (const PreconditionError&) {
  }
  return std::max(tail, 20.0 * scale);
}

namespace {

std::size_t round_up4(double x) {
  const auto n = static_cast<std::size_t>(std::ceil(x - 1e-9));
  return std::max<std::size_t>(4, (n + 3) / 4 * 4);
}

void append_uniform(std::vector<double>& nodes, std::vector<Segment>& segs, double a, double b,
                    std::size_t n) {
  const std::size_t first = nodes.size() - 1;
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t j = 1; j < n; ++j) nodes.push_back(a + h * static_cast<double>(j));
  nodes.push_back(b);
  segs.push_back({first, nodes.size() - 1, false});
}

}  // namespace

RadialGrid make_grid(const PotentialSpec& pot, GridSpec spec) {
  if (!(spec.r_min > 0.0)) throw DomainError("r_min must be positive");
  if (spec.r_max <= 0.0) spec.r_max = default_r_max(pot);
  if (!(spec.r_max > spec.r_min)) throw DomainError("r_max must exceed r_min");
  if (spec.points_per_decade < 16) throw DomainError("points_per_decade must be at least 16");

  std::vector<double> cuts;
  for (double x : breakpoints(pot))
    if (x > spec.r_min && x < spec.r_max) cuts.push_back(x);

  double log_end = std::min(spec.log_segment_end, 0.5 * spec.r_max);
  if (!cuts.empty()) log_end = std::min(log_end, 0.5 * cuts.front());
  log_end = std::max(log_end, spec.r_min * 10.0);

  std::vector<double> nodes{spec.r_min};
  std::vector<Segment> segs;

  {
    const double decades = std::log10(log_end / spec.r_min);
    const std::size_t n = round_up4(decades * spec.points_per_decade);
    const double lo = std::log(spec.r_min);
    const double dt = (std::log(log_end) - lo) / static_cast<double>(n);
    for (std::size_t j = 1; j < n; ++j) nodes.push_back(std::exp(lo + dt * static_cast<double>(j)));
    nodes.push_back(log_end);
    segs.push_back({0, nodes.size() - 1, true});
  }

  cuts.push_back(spec.r_max);
  double x = log_end;
  for (double cut : cuts) {
    while (x < cut * (1.0 - 1e-14)) {
      const double len = std::min(cut - x, std::max(1.0, 0.5 * x));
      const double end = (cut - x - len < 1e-12 * cut) ? cut : x + len;
      double h = std::max(spec.max_step, spec.relative_step * x);
      const double vmax = max_abs_on(pot, x, end);
      if (vmax > 0.0) h = std::min(h, 0.5 / std::sqrt(vmax));
      if (spec.k_max_hint > 0.0) h = std::min(h, 0.1 / spec.k_max_hint);
      append_uniform(nodes, segs, x, end, round_up4((end - x) / h));
      x = end;
    }
  }
  return RadialGrid(std::move(nodes), std::move(segs));
}

PotentialSamples sample_potential(const PotentialSpec& pot, const RadialGrid& grid) {
  PotentialSamples s;
  s.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s.values[i] = pot(grid[i]);
  s.left_end.reserve(grid.segments().size());
  for (const auto& seg : grid.segments()) {
    s.left_end.push_back(evaluate_left(pot, grid[seg.last]));
    // Segments start from the right limit, which a closed truncation does not give at its cutoff.
    if (seg.first > 0) s.values[seg.first] = pot(std::nextafter(grid[seg.first], std::numeric_limits<double>::infinity()));
  }
  return s;
}

}  // namespace erange
