#include "erange/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "erange/errors.hpp"
#include "erange/kernels.hpp"

namespace erange {

SampledFunction times_potential(const PotentialSamples& v, const std::vector<double>& g,
                                const RadialGrid& grid) {
  SampledFunction out;
  out.values.resize(g.size());
  kernels::hadamard(g.data(), v.values.data(), out.values.data(), g.size());
  out.segment_end.reserve(grid.segments().size());
  for (std::size_t s = 0; s < grid.segments().size(); ++s)
    out.segment_end.push_back(g[grid.segments()[s].last] * v.left_end[s]);
  return out;
}

namespace {

// Integrand value at local position j of segment s, in the segment's own variable.
struct SegmentView {
  const RadialGrid& grid;
  const SampledFunction& f;
  std::size_t s;
  const Segment& seg;

  double at(std::size_t j) const {
    const std::size_t i = seg.first + j;
    const double y = (i == seg.last) ? f.end_value(grid, s) : f.values[i];
    return seg.logarithmic ? y * grid[i] : y;
  }
  std::size_t intervals() const { return seg.last - seg.first; }
  double step() const {
    const double a = grid[seg.first];
    const double b = grid[seg.last];
    const double n = static_cast<double>(intervals());
    return seg.logarithmic ? std::log(b / a) / n : (b - a) / n;
  }
};

constexpr std::size_t kPanelPoints = 6;

// Weights integrating the degree m-1 interpolant on nodes 0..m-1 over [o, o+1], unit spacing.
std::array<double, kPanelPoints> lagrange_panel(std::size_t m, std::size_t o) {
  static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  std::array<double, kPanelPoints> w{};
  for (int g = 0; g < 3; ++g) {
    const double t = o + 0.5 * (1.0 + gx[g]);
    for (std::size_t q = 0; q < m; ++q) {
      double l = 1.0;
      for (std::size_t p = 0; p < m; ++p)
        if (p != q) l *= (t - p) / (static_cast<double>(q) - p);
      w[q] += 0.5 * gw[g] * l;
    }
  }
  return w;
}

const std::array<double, kPanelPoints>& panel_weights(std::size_t m, std::size_t o) {
  static const auto table = [] {
    std::array<std::array<std::array<double, kPanelPoints>, kPanelPoints>, kPanelPoints + 1> t{};
    for (std::size_t mm = 2; mm <= kPanelPoints; ++mm)
      for (std::size_t oo = 0; oo + 1 < mm; ++oo) t[mm][oo] = lagrange_panel(mm, oo);
    return t;
  }();
  return table[m][o];
}

void check_size(const RadialGrid& grid, const SampledFunction& f) {
  if (f.values.size() != grid.size()) throw PreconditionError("integrand size does not match the grid");
  if (!f.segment_end.empty() && f.segment_end.size() != grid.segments().size())
    throw PreconditionError("segment end values do not match the grid");
}

}  // namespace

double integrate(const RadialGrid& grid, const SampledFunction& f) {
  check_size(grid, f);
  double total = 0.0;
  for (std::size_t s = 0; s < grid.segments().size(); ++s) {
    const SegmentView v{grid, f, s, grid.segments()[s]};
    const std::size_t n = v.intervals();
    const double h = v.step();
    double acc = 0.0;
    for (std::size_t j = 0; j + 4 <= n; j += 4)
      acc += 7.0 * (v.at(j) + v.at(j + 4)) + 32.0 * (v.at(j + 1) + v.at(j + 3)) + 12.0 * v.at(j + 2);
    total += acc * 2.0 * h / 45.0;
  }
  return total;
}

double integrate(const RadialGrid& grid, const std::vector<double>& f) {
  return integrate(grid, SampledFunction{f, {}});
}

std::vector<double> cumulative(const RadialGrid& grid, const SampledFunction& f) {
  check_size(grid, f);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t s = 0; s < grid.segments().size(); ++s) {
    const SegmentView v{grid, f, s, grid.segments()[s]};
    const std::size_t n = v.intervals();
    const std::size_t m = std::min<std::size_t>(kPanelPoints, n + 1);
    const double h = v.step();
    double acc = out[v.seg.first];
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t c = m / 2 - 1;
      const std::size_t first = std::min(j > c ? j - c : 0, n + 1 - m);
      const std::array<double, kPanelPoints>& w = panel_weights(m, j - first);
      double piece = 0.0;
      for (std::size_t q = 0; q < m; ++q) piece += w[q] * v.at(first + q);
      acc += h * piece;
      out[v.seg.first + j + 1] = acc;
    }
  }
  return out;
}

std::vector<double> cumulative(const RadialGrid& grid, const std::vector<double>& f) {
  return cumulative(grid, SampledFunction{f, {}});
}

}  // namespace erange
