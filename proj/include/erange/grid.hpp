#pragma once

#include <cstddef>
#include <vector>

#include "erange/potential.hpp"

namespace erange {

struct GridSpec {
  double r_min = 1e-8;
  double r_max = 0.0;              ///< 0 selects a default from the potential's range
  int points_per_decade = 128;     ///< logarithmic segment near the origin
  double log_segment_end = 0.05;
  double max_step = 0.005;
  double relative_step = 0.01;     ///< far-field step is allowed to grow as relative_step * r
  double k_max_hint = 0.0;         ///< caps the step at 0.1 / k when positive
};

/// A run of nodes with constant spacing, in r or (logarithmic) in ln r.
struct Segment {
  std::size_t first = 0;
  std::size_t last = 0;  ///< inclusive; shared with the next segment's first
  bool logarithmic = false;
};

class RadialGrid {
 public:
  RadialGrid() = default;
  RadialGrid(std::vector<double> nodes, std::vector<Segment> segments);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  double r_min() const noexcept { return nodes_.front(); }
  double r_max() const noexcept { return nodes_.back(); }

  /// Index of the last node <= r (clamped to the grid).
  std::size_t locate(double r) const;

  bool same_as(const RadialGrid& other) const noexcept { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
  std::vector<Segment> segments_;
};

/// Default outer radius: a few ranges past the last breakpoint, or where the tail is negligible.
double default_r_max(const PotentialSpec& pot);

/// Builds a grid with nodes on every breakpoint of pot below r_max; each segment has a
/// multiple of 4 intervals.
RadialGrid make_grid(const PotentialSpec& pot, GridSpec spec = {});

/// V sampled on a grid. left_end[s] is V(r-) at the last node of segment s.
struct PotentialSamples {
  std::vector<double> values;
  std::vector<double> left_end;
};

PotentialSamples sample_potential(const PotentialSpec& pot, const RadialGrid& grid);

}  // namespace erange
