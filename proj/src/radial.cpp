#include "erange/radial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "erange/errors.hpp"
#include "erange/kernels.hpp"
#include "erange/magnus.hpp"
#include "erange/quadrature.hpp"
#include "erange/special.hpp"

namespace erange {

double RadialSolution::value(std::size_t i) const { return phi[i] * std::exp(log_scale[i]); }
double RadialSolution::derivative(std::size_t i) const { return phi_prime[i] * std::exp(log_scale[i]); }

namespace {

void check_ell(int ell) {
  if (ell < 0 || ell > kDefaultEllMax) throw DomainError("angular momentum must lie in 0..10");
}

RadialSolution from_propagation(const RadialGrid& grid, Propagation&& p, double k, double energy,
                                int ell, Normalization norm) {
  RadialSolution s;
  s.grid = grid;
  s.k = k;
  s.energy = energy;
  s.ell = ell;
  s.phi = std::move(p.y);
  s.phi_prime = std::move(p.yp);
  s.log_scale = std::move(p.log_scale);
  s.normalization = norm;
  s.max_local_error = p.max_local_error;
  return s;
}

std::vector<double> powers(const RadialGrid& grid, double p) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = std::pow(grid[i], p);
  return out;
}

}  // namespace

RadialSolution solve_regular_energy(const PotentialSpec& pot, double energy, int ell,
                                    const RadialGrid& grid, SolverOptions options) {
  check_ell(ell);
  if (!std::isfinite(energy)) throw DomainError("energy must be finite");
  const double cent = ell * (ell + 1.0);
  auto f = [&](double r) { return pot(r) + cent / (r * r) - energy; };

  const double r0 = grid.r_min();
  const double c = (pot(r0) - energy) / (2.0 * (2.0 * ell + 3.0));
  const double norm = double_factorial(2 * ell + 1);
  const double y0 = std::pow(r0, ell + 1) / norm * (1.0 + c * r0 * r0);
  const double yp0 = std::pow(r0, ell) / norm * ((ell + 1.0) + (ell + 3.0) * c * r0 * r0);

  Propagation p = propagate(grid, f, 0, grid.size() - 1, y0, yp0, 0.0, {options.estimate_error});
  const double k = energy > 0.0 ? std::sqrt(energy) : 0.0;
  return from_propagation(grid, std::move(p), k, energy, ell, Normalization::regular_origin);
}

RadialSolution solve_regular(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid,
                             SolverOptions options) {
  if (!(k >= 0.0)) throw DomainError("momentum must be non-negative");
  RadialSolution s = solve_regular_energy(pot, k * k, ell, grid, options);
  s.k = k;
  return s;
}

RadialSolution solve_zero_regular_volterra(const PotentialSpec& pot, int ell, const RadialGrid& grid,
                                           VolterraOptions options) {
  check_ell(ell);
  const std::size_t n = grid.size();
  const double norm = double_factorial(2 * ell + 1);
  const double w = 2.0 * ell + 1.0;
  const PotentialSamples v = sample_potential(pot, grid);

  const std::vector<double> r_up = powers(grid, ell + 1.0);   // r^(l+1)
  const std::vector<double> r_down = powers(grid, -ell);      // r^(-l)
  std::vector<double> seed(n), seed_prime(n);
  for (std::size_t i = 0; i < n; ++i) {
    seed[i] = r_up[i] / norm;
    seed_prime[i] = (ell + 1.0) * r_up[i] / grid[i] / norm;
  }

  std::vector<double> phi = seed;
  std::vector<double> g1(n), g2(n), next(n);
  std::vector<double> i1, i2;
  bool settled = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    kernels::hadamard(r_down.data(), phi.data(), g1.data(), n);
    kernels::hadamard(r_up.data(), phi.data(), g2.data(), n);
    i1 = cumulative(grid, times_potential(v, g1, grid));
    i2 = cumulative(grid, times_potential(v, g2, grid));
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = seed[i] + (r_up[i] * i1[i] - r_down[i] * i2[i]) / w;
      if (!std::isfinite(next[i])) throw IterationError("Volterra iteration overflowed; use the ODE solver");
      change = std::max(change, std::abs(next[i] - phi[i]) / (std::abs(next[i]) + seed[i]));
    }
    phi.swap(next);
    if (change < options.tolerance) {
      settled = true;
      break;
    }
  }
  if (!settled)
    throw IterationError("Volterra iteration did not converge in " + std::to_string(options.max_iterations) +
                         " iterations; use the ODE solver");

  // Derivative from the converged iterate.
  kernels::hadamard(r_down.data(), phi.data(), g1.data(), n);
  kernels::hadamard(r_up.data(), phi.data(), g2.data(), n);
  i1 = cumulative(grid, times_potential(v, g1, grid));
  i2 = cumulative(grid, times_potential(v, g2, grid));
  std::vector<double> dphi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    dphi[i] = seed_prime[i] + ((ell + 1.0) * r_up[i] / r * i1[i] + ell * r_down[i] / r * i2[i]) / w;
  }

  RadialSolution s;
  s.grid = grid;
  s.ell = ell;
  s.phi = std::move(phi);
  s.phi_prime = std::move(dphi);
  s.log_scale.assign(n, 0.0);
  s.normalization = Normalization::regular_origin;
  return s;
}

RadialSolution solve_zero_bounded(const PotentialSpec& pot, int ell, const RadialGrid& grid) {
  check_ell(ell);
  const double R = grid.r_max();
  const double tail = tail_moment_abs(pot, R, 1.0);
  if (tail >= 1e-10) {
    std::ostringstream msg;
    msg << "r_max = " << R << " leaves integral r|V| = " << tail << " beyond the grid; need r_max >= "
        << tail_radius(pot, 1e-10);
    throw PreconditionError(msg.str());
  }
  const double w = 2.0 * ell + 1.0;
  const double j1 = tail_integral(pot, R, [ell](double t) { return std::pow(t, -2.0 * ell); });
  const double j2 = tail_integral(pot, R, [](double t) { return t; });
  const double chi = std::pow(R, -ell) - (std::pow(R, ell + 1.0) * j1 - std::pow(R, -ell) * j2) / w;
  const double chi_p = -ell * std::pow(R, -ell - 1.0) -
                       ((ell + 1.0) * std::pow(R, ell) * j1 + ell * std::pow(R, -ell - 1.0) * j2) / w;

  const double cent = ell * (ell + 1.0);
  auto f = [&](double r) { return pot(r) + cent / (r * r); };
  Propagation p = propagate(grid, f, grid.size() - 1, 0, chi, chi_p);
  return from_propagation(grid, std::move(p), 0.0, 0.0, ell, Normalization::bounded_infinity);
}

ZeroEnergyAmplitudes zero_energy_amplitudes(const RadialSolution& sol, std::size_t i) {
  const double r = sol.grid[i];
  const int l = sol.ell;
  const double y = sol.phi[i];
  const double yp = sol.phi_prime[i];
  ZeroEnergyAmplitudes a;
  a.growing = std::pow(r, -l - 1.0) * (l * y + r * yp) / (2.0 * l + 1.0);
  a.decaying = std::pow(r, l) * ((l + 1.0) * y - r * yp) / (2.0 * l + 1.0);
  a.log_scale = sol.log_scale[i];
  return a;
}

RadialSolution normalize_at_infinity(const RadialSolution& regular_zero) {
  if (regular_zero.energy != 0.0) throw PreconditionError("normalisation at infinity needs a zero-energy solution");
  const std::size_t last = regular_zero.size() - 1;
  const ZeroEnergyAmplitudes amp = zero_energy_amplitudes(regular_zero, last);
  const double scale = std::max(std::abs(regular_zero.phi[last]),
                                regular_zero.grid.r_max() * std::abs(regular_zero.phi_prime[last]));
  if (!(std::abs(amp.growing) * std::pow(regular_zero.grid.r_max(), regular_zero.ell + 1.0) > 1e-14 * scale))
    throw ResonanceError("regular zero-energy solution has no growing component at r_max");
  RadialSolution out = regular_zero;
  const double shift = amp.log_scale + std::log(std::abs(amp.growing));
  const double sign = amp.growing > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i <= last; ++i) {
    out.phi[i] *= sign;
    out.phi_prime[i] *= sign;
    out.log_scale[i] -= shift;
  }
  out.normalization = Normalization::growing_infinity;
  return out;
}

WronskianResult wronskian(const RadialSolution& a, const RadialSolution& b) {
  if (!a.grid.same_as(b.grid)) throw PreconditionError("Wronskian of solutions on different grids");
  if (a.ell != b.ell) throw PreconditionError("Wronskian of solutions with different angular momentum");
  if (a.energy != b.energy) throw PreconditionError("Wronskian of solutions at different energies");
  const std::size_t n = a.size();
  WronskianResult w;
  w.values.resize(n);
  kernels::cross(a.phi.data(), a.phi_prime.data(), b.phi.data(), b.phi_prime.data(), w.values.data(), n);
  for (std::size_t i = 0; i < n; ++i) w.values[i] *= std::exp(a.log_scale[i] + b.log_scale[i]);
  std::vector<double> sorted = w.values;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  w.median = sorted[n / 2];
  w.max_deviation = kernels::max_abs_deviation(w.values.data(), w.median, n);
  return w;
}

int count_nodes(const RadialSolution& sol) {
  constexpr int kRefine = 16;
  int count = 0;
  int last_sign = 0;
  auto visit = [&](double y) {
    const int s = (y > 0.0) - (y < 0.0);
    if (s == 0) return;
    if (last_sign != 0 && s != last_sign) ++count;
    last_sign = s;
  };
  visit(sol.phi[0]);
  for (std::size_t i = 0; i + 1 < sol.size(); ++i) {
    const double h = sol.grid[i + 1] - sol.grid[i];
    // Bring node i to node i+1's scale.
    const double m = std::exp(sol.log_scale[i] - sol.log_scale[i + 1]);
    const double y0 = sol.phi[i] * m, d0 = sol.phi_prime[i] * m;
    const double y1 = sol.phi[i + 1], d1 = sol.phi_prime[i + 1];
    for (int j = 1; j <= kRefine; ++j) {
      const double t = static_cast<double>(j) / kRefine;
      const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
      const double h10 = t * (1.0 - t) * (1.0 - t);
      const double h01 = t * t * (3.0 - 2.0 * t);
      const double h11 = t * t * (t - 1.0);
      visit(h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1);
    }
  }
  return count;
}

int count_zero_energy_nodes(const RadialSolution& sol) {
  if (sol.energy != 0.0) throw PreconditionError("zero-energy node count needs a zero-energy solution");
  const std::size_t last = sol.size() - 1;
  const ZeroEnergyAmplitudes amp = zero_energy_amplitudes(sol, last);
  const bool crosses = amp.growing != 0.0 && (amp.growing > 0.0) != (sol.phi[last] > 0.0) && sol.phi[last] != 0.0;
  return count_nodes(sol) + (crosses ? 1 : 0);
}

namespace {

// Decaying solution of the free equation at energy -gamma^2: w_l(x) e^{x} and its x-derivative.
void decaying_free(int ell, double x, double& w, double& wx) {
  double sum = 0.0;
  double dsum = 0.0;
  double coeff = 1.0;  // (l+j)! / (j! (l-j)!) / 2^j
  for (int j = 0; j <= ell; ++j) {
    if (j > 0) coeff *= static_cast<double>((ell + j) * (ell - j + 1)) / (2.0 * j);
    const double xp = std::pow(x, -j);
    sum += coeff * xp;
    dsum -= j * coeff * xp / x;
  }
  w = sum;
  wx = dsum - sum;
}

std::size_t match_index(const PotentialSpec& pot, const RadialGrid& grid) {
  double r = range_scale(pot);
  if (const auto s = support_radius(pot)) r = std::max(*s, 1e-3);
  r = std::min(r, 0.5 * grid.r_max());
  return std::max<std::size_t>(grid.locate(r), 1);
}

}  // namespace

double bound_state_mismatch(const PotentialSpec& pot, int ell, const RadialGrid& grid, double gamma) {
  check_ell(ell);
  if (!(gamma > 0.0)) throw DomainError("binding momentum must be positive");
  const double energy = -gamma * gamma;
  const double cent = ell * (ell + 1.0);
  auto f = [&](double r) { return pot(r) + cent / (r * r) - energy; };
  const std::size_t m = match_index(pot, grid);
  const std::size_t last = grid.size() - 1;

  const double r0 = grid.r_min();
  const double c = (pot(r0) - energy) / (2.0 * (2.0 * ell + 3.0));
  const double norm = double_factorial(2 * ell + 1);
  const double y0 = std::pow(r0, ell + 1) / norm * (1.0 + c * r0 * r0);
  const double yp0 = std::pow(r0, ell) / norm * ((ell + 1.0) + (ell + 3.0) * c * r0 * r0);
  const Propagation out = propagate(grid, f, 0, m, y0, yp0);

  double w, wx;
  decaying_free(ell, gamma * grid.r_max(), w, wx);
  const Propagation in = propagate(grid, f, last, m, w, gamma * wx, -gamma * grid.r_max());

  const double a = out.y[m], ap = out.yp[m];
  const double b = in.y[m], bp = in.yp[m];
  const double na = std::hypot(gamma * a, ap);
  const double nb = std::hypot(gamma * b, bp);
  return (ap * b - a * bp) / (na * nb);
}

namespace {

double refine_root(const std::function<double(double)>& g, double lo, double hi, double glo, double ghi) {
  while ((hi - lo) > 1e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  // Illinois false position.
  int side = 0;
  for (int it = 0; it < 100 && (hi - lo) > 1e-15 * hi; ++it) {
    const double x = (lo * ghi - hi * glo) / (ghi - glo);
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == (glo < 0.0)) {
      lo = x;
      glo = gx;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const std::function<double(double)>& g, const std::vector<double>& pts) {
  std::vector<double> roots;
  double prev_x = pts.front();
  double prev_g = g(prev_x);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double x = pts[i];
    const double gx = g(x);
    if (gx == 0.0) {
      roots.push_back(x);
    } else if (prev_g != 0.0 && (gx < 0.0) != (prev_g < 0.0)) {
      roots.push_back(refine_root(g, prev_x, x, prev_g, gx));
    }
    prev_x = x;
    prev_g = gx;
  }
  return roots;
}

}  // namespace

BoundStateSpectrum bound_states(const PotentialSpec& pot, int ell, const RadialGrid& grid) {
  check_ell(ell);
  BoundStateSpectrum spec;
  spec.node_count = count_zero_energy_nodes(solve_regular(pot, 0.0, ell, grid, {false}));

  const double cent = ell * (ell + 1.0);
  double lowest = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) lowest = std::min(lowest, pot(grid[i]) + cent / (grid[i] * grid[i]));
  for (const auto& seg : grid.segments())
    lowest = std::min(lowest, evaluate_left(pot, grid[seg.last]) + cent / (grid[seg.last] * grid[seg.last]));
  if (lowest >= 0.0) {
    if (spec.node_count != 0)
      throw ConsistencyError("zero-energy solution has nodes but the potential admits no bound state");
    return spec;
  }
  const double gmax = std::sqrt(-lowest);
  auto g = [&](double gamma) { return bound_state_mismatch(pot, ell, grid, gamma); };

  for (int attempt = 0; attempt < 3; ++attempt) {
    const int points = 200 * (attempt == 0 ? 1 : 10 * attempt);
    std::vector<double> pts;
    // Geometric approach to zero catches weakly bound states, uniform beyond.
    for (int j = 12; j >= 1; --j) pts.push_back(gmax / points * std::pow(10.0, -0.25 * j * (attempt + 1)));
    for (int j = 1; j <= points; ++j) pts.push_back(gmax * j / points);
    std::vector<double> roots = scan_roots(g, pts);
    if (static_cast<int>(roots.size()) == spec.node_count) {
      std::sort(roots.begin(), roots.end(), std::greater<>());
      spec.gammas = std::move(roots);
      return spec;
    }
  }
  throw ConsistencyError("bound-state search found a root count different from the " +
                         std::to_string(spec.node_count) + " nodes of the zero-energy solution; refine the grid");
}

ZeroEnergySlope zero_energy_slope(const PotentialSpec& pot, const RadialGrid& grid) {
  const RadialSolution s = solve_regular(pot, 0.0, 0, grid, {false});
  const PotentialSamples v = sample_potential(pot, grid);
  std::vector<double> phi(s.size()), rphi(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    phi[i] = s.value(i);
    rphi[i] = grid[i] * phi[i];
  }
  ZeroEnergySlope out;
  out.slope_at_rmax = s.derivative(s.size() - 1);
  out.volterra_slope = 1.0 + integrate(grid, times_potential(v, phi, grid));
  out.first_moment = integrate(grid, times_potential(v, rphi, grid));
  return out;
}

}  // namespace erange
