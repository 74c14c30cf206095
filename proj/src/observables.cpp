#include "erange/observables.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "erange/errors.hpp"
#include "erange/kernels.hpp"
#include "erange/parallel.hpp"
#include "erange/quadrature.hpp"
#include "erange/special.hpp"

namespace erange {

using std::numbers::pi;

std::string to_string(PhaseMethod m) {
  return m == PhaseMethod::integral_formula ? "integral_formula" : "asymptotic_matching";
}

RadialGrid phase_grid(const PotentialSpec& pot, double k_max) {
  GridSpec spec;
  spec.k_max_hint = k_max;
  return make_grid(pot, spec);
}

namespace {

void require_momentum(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("momentum must be positive and finite");
}

void require_nonnegative(const PotentialSpec& pot, const char* what) {
  if (!is_nonnegative(pot))
    throw PreconditionError(std::string(what) +
                            " requires V(r) >= 0 everywhere; use the matching method / low-k fit instead");
}

// Numerators N_u = k u' phi - u phi', N_v = k v' phi - v phi' at every node, with phi and phi'
// divided by a per-node factor so that squares stay finite (the phase formulas are scale-free).
struct Projections {
  std::vector<double> nu, nv;
  std::vector<double> phi;  ///< the rescaled phi used for nu, nv
};

Projections project(const RadialSolution& sol, double k) {
  const std::size_t n = sol.size();
  std::vector<double> u(n), up(n), v(n), vp(n), dphi(n);
  Projections p;
  p.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RiccatiBesselValues rb = riccati_bessel(sol.ell, k * sol.grid[i]);
    u[i] = rb.u;
    up[i] = k * rb.u_prime;
    v[i] = rb.v;
    vp[i] = k * rb.v_prime;
    const double m = std::max(std::abs(sol.phi[i]), std::abs(sol.phi_prime[i]) / k);
    const double inv = m > 0.0 ? 1.0 / m : 1.0;
    p.phi[i] = sol.phi[i] * inv;
    dphi[i] = sol.phi_prime[i] * inv;
  }
  p.nu.resize(n);
  p.nv.resize(n);
  kernels::cross(u.data(), up.data(), p.phi.data(), dphi.data(), p.nu.data(), n);
  kernels::cross(v.data(), vp.data(), p.phi.data(), dphi.data(), p.nv.data(), n);
  return p;
}

double wrap_half_pi(double x) {
  // representative of x mod pi in (-pi/2, pi/2]
  double y = std::remainder(x, pi);
  if (y <= -pi / 2) y += pi;
  return y;
}

}  // namespace

double phase_tail_correction(const PotentialSpec& pot, double k, int ell, double R, double delta_R) {
  require_momentum(k);
  const auto support = support_radius(pot);
  if (support && R >= *support) return 0.0;
  const double c = std::cos(delta_R);
  const double s = std::sin(delta_R);
  auto f = [&](double r) {
    const RiccatiBesselValues rb = riccati_bessel(ell, k * r);
    const double w = rb.u * c + rb.v * s;
    return pot(r) * w * w;
  };
  std::vector<double> cuts;
  for (double x : breakpoints(pot))
    if (x > R) cuts.push_back(x);
  double total = 0.0;
  double r = R;
  for (int panel = 0; panel < 200000; ++panel) {
    double width = std::min(3.0 * pi / k, std::max(0.5, 0.5 * r));
    for (double x : cuts)
      if (x > r && x < r + width) width = x - r;
    if (support) width = std::min(width, *support - r);
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, r, r + width);
    r += width;
    if (support && r >= *support * (1.0 - 1e-15)) break;
    if (panel % 8 == 7) {
      const RiccatiBesselValues rb = riccati_bessel(ell, k * r);
      const double envelope = std::max(1.0, rb.u * rb.u + rb.v * rb.v);
      if (tail_moment_abs(pot, r, 0.0) * envelope / k < 1e-17) break;
    }
  }
  return -total / k;
}

double phase_shift_integral(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid) {
  require_momentum(k);
  require_nonnegative(pot, "the phase-shift integral");
  const RadialSolution sol = solve_regular(pot, k, ell, grid, {false});
  const Projections p = project(sol, k);
  const std::size_t n = sol.size();
  std::vector<double> den(n), g(n);
  kernels::quadratic_form(p.nu.data(), p.nv.data(), 1.0, den.data(), n);
  const std::vector<double> ones(n, 1.0);
  kernels::scaled_quotient(ones.data(), p.phi.data(), den.data(), g.data(), n);
  const PotentialSamples v = sample_potential(pot, grid);
  const double delta_R = -k * integrate(grid, times_potential(v, g, grid));
  return delta_R + phase_tail_correction(pot, k, ell, grid.r_max(), delta_R);
}

double phase_shift_integral(const PotentialSpec& pot, double k, int ell) {
  return phase_shift_integral(pot, k, ell, phase_grid(pot, k));
}

double phase_shift_matching(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid) {
  require_momentum(k);
  const RadialSolution sol = solve_regular(pot, k, ell, grid, {false});
  const Projections p = project(sol, k);
  constexpr double eps = 1e-9;
  double delta = wrap_half_pi(std::atan2(p.nu[0], -p.nv[0]));
  const double gauss = std::sqrt(15.0) / 10.0;
  for (std::size_t i = 1; i < sol.size(); ++i) {
    const double a = grid[i - 1];
    const double h = grid[i] - a;
    const double v1 = pot(a + (0.5 - gauss) * h), v2 = pot(a + 0.5 * h), v3 = pot(a + (0.5 + gauss) * h);
    const bool positive = v1 > 0.0 && v2 > 0.0 && v3 > 0.0;
    const bool negative = v1 < 0.0 && v2 < 0.0 && v3 < 0.0;
    const double theta = wrap_half_pi(std::atan2(p.nu[i], -p.nv[i]));
    // Candidates theta + m pi.
    const double m_near = std::round((delta - theta) / pi);
    double best = theta + m_near * pi;
    if (positive) {
      best = theta + std::floor((delta + eps - theta) / pi) * pi;
    } else if (negative) {
      best = theta + std::ceil((delta - eps - theta) / pi) * pi;
    }
    delta = best;
  }
  return delta + phase_tail_correction(pot, k, ell, grid.r_max(), delta);
}

double phase_shift_matching(const PotentialSpec& pot, double k, int ell) {
  return phase_shift_matching(pot, k, ell, phase_grid(pot, k));
}

PhaseShiftCurve phase_shift_curve(const PotentialSpec& pot, int ell, const std::vector<double>& k_values,
                                  PhaseMethod method) {
  if (k_values.empty()) throw PreconditionError("empty k grid");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    require_momentum(k_values[i]);
    if (i > 0 && !(k_values[i] > k_values[i - 1])) throw PreconditionError("k grid must be ascending");
  }
  if (method == PhaseMethod::integral_formula) require_nonnegative(pot, "the phase-shift integral");
  const RadialGrid grid = phase_grid(pot, k_values.back());
  PhaseShiftCurve curve;
  curve.ell = ell;
  curve.k_values = k_values;
  curve.method = method;
  curve.delta.resize(k_values.size());
  parallel_for(k_values.size(), [&](std::size_t i) {
    curve.delta[i] = method == PhaseMethod::integral_formula ? phase_shift_integral(pot, k_values[i], ell, grid)
                                                             : phase_shift_matching(pot, k_values[i], ell, grid);
  });
  for (std::size_t i = 1; i < curve.delta.size(); ++i)
    curve.max_adjacent_jump = std::max(curve.max_adjacent_jump, std::abs(curve.delta[i] - curve.delta[i - 1]));
  curve.branch_continuous = curve.max_adjacent_jump < pi / 2;
  return curve;
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Relative accuracy assumed for the propagated zero-energy solution.
constexpr double kLimitSolutionError = 1e-12;

// Zero-energy free solutions U0 = r^(l+1)/(2l+1)!!, V0 = (2l-1)!! r^-l and their k^2 corrections.
struct FreeZero {
  int l;
  double df_up, df_down;  // (2l+1)!!, (2l-1)!!
  explicit FreeZero(int ell) : l(ell), df_up(double_factorial(2 * ell + 1)), df_down(double_factorial(2 * ell - 1)) {}
  double U0(double r) const { return std::pow(r, l + 1) / df_up; }
  double U0p(double r) const { return (l + 1.0) * std::pow(r, l) / df_up; }
  double V0(double r) const { return df_down * std::pow(r, -l); }
  double U1(double r) const { return -std::pow(r, l + 3) / (2.0 * (2.0 * l + 3.0) * df_up); }
  double V1(double r) const { return df_down * std::pow(r, 2 - l) / (2.0 * (2.0 * l - 1.0)); }
};

// Dz = (2l-1)!! (r^-l phi' + l r^(-l-1) phi), on mantissas.
std::vector<double> dz(const RadialSolution& sol, const FreeZero& fz) {
  std::vector<double> out(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.grid[i];
    out[i] = fz.df_down * std::pow(r, -fz.l) * (sol.phi_prime[i] + fz.l * sol.phi[i] / r);
  }
  return out;
}

// Amplification of relative solution error in the limit form's numerator.
double limit_condition(const RadialSolution& sol, int l, std::size_t i) {
  const double r = sol.grid[i];
  const double y = sol.phi[i], yp = sol.phi_prime[i];
  const double diff = std::abs(r * yp - (l + 1.0) * y);
  return diff > 0.0 ? (std::abs(r * yp) + (l + 1.0) * std::abs(y)) / diff : kInfinity;
}

double limit_form(const RadialSolution& sol, const FreeZero& fz, std::size_t i) {
  const double r = sol.grid[i];
  const int l = fz.l;
  const double y = sol.phi[i], yp = sol.phi_prime[i];
  return std::pow(r, 2 * l + 1) * (r * yp - (l + 1.0) * y) / ((r * yp + l * y) * fz.df_up * fz.df_down);
}

std::optional<double> power_exponent(const PotentialSpec& pot) {
  try {
    const double s = tail_exponent(pot);
    if (std::isfinite(s)) return s;
  } catch (const IndeterminateError&) {
  }
  return std::nullopt;
}

}  // namespace

ScatteringLengthResult scattering_length(const PotentialSpec& pot, int ell, const RadialGrid& grid) {
  require_nonnegative(pot, "the scattering-length integral");
  ScatteringLengthResult out;
  const Finiteness fin = predict_finiteness(pot, ell);
  if (!fin.a_finite) {
    const double s = power_exponent(pot).value_or(0.0);
    out.a = Quantity::divergent(2.0 * ell + 3.0 - s, "r^(2l+2) V not integrable");
    out.a.evidence = truncation_scan(pot, ScanQuantity::a, ell, theorem_scan_ladder());
    out.integral_form = out.limit_form = std::numeric_limits<double>::infinity();
    return out;
  }
  const FreeZero fz(ell);
  const RadialSolution sol = solve_regular(pot, 0.0, ell, grid, {false});
  const std::size_t n = sol.size();
  const std::vector<double> d = dz(sol, fz);
  std::vector<double> q(n), g(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = sol.phi[i] / d[i];
  kernels::hadamard(q.data(), q.data(), g.data(), n);
  const double integral = integrate(grid, times_potential(sample_potential(pot, grid), g, grid));
  const double lim = limit_form(sol, fz, n - 1);
  const double R = grid.r_max();
  out.tail_correction = tail_integral(pot, R, [&](double r) {
    const double w = fz.U0(r) - lim * fz.V0(r);
    return w * w;
  });
  out.integral_form = integral + out.tail_correction;
  out.limit_form = lim + out.tail_correction;
  const double scale = std::max(std::abs(out.limit_form), 1e-300);
  out.relative_disagreement = std::abs(out.integral_form - out.limit_form) / scale;
  if (out.integral_form == 0.0 && out.limit_form == 0.0) out.relative_disagreement = 0.0;
  out.limit_condition = limit_condition(sol, ell, n - 1);
  // The boundary form only constrains the integral while its cancellation leaves digits.
  const double limit_noise = kLimitSolutionError * out.limit_condition;
  if (out.relative_disagreement > 1e-3 + limit_noise)
    throw ConsistencyError("scattering-length integral and boundary forms disagree by " +
                           std::to_string(out.relative_disagreement));
  out.consistency_warning = out.relative_disagreement > 1e-6 + limit_noise;
  out.a = Quantity::of(out.integral_form);
  return out;
}

ScatteringLengthResult scattering_length(const PotentialSpec& pot, int ell) {
  return scattering_length(pot, ell, make_grid(pot));
}

BCoefficientResult b_coefficient(const PotentialSpec& pot, int ell, const RadialGrid& grid) {
  require_nonnegative(pot, "the b-coefficient integral");
  const Finiteness fin = predict_finiteness(pot, ell);
  if (!fin.a_finite) throw PreconditionError("b requested for a potential with divergent scattering length");
  BCoefficientResult out;
  if (!fin.r_finite) {
    const double s = power_exponent(pot).value_or(0.0);
    out.b = Quantity::divergent(2.0 * ell + 5.0 - s, "r^(2l+4) V not integrable");
    out.b.evidence = truncation_scan(pot, ScanQuantity::r_eff, ell, theorem_scan_ladder());
    out.variable_phase_form = out.product_form = std::numeric_limits<double>::infinity();
    return out;
  }
  const FreeZero fz(ell);
  const RadialSolution sol = solve_regular(pot, 0.0, ell, grid, {false});
  const std::size_t n = sol.size();
  const std::size_t last = n - 1;
  const std::vector<double> d = dz(sol, fz);
  const double s_ref = sol.log_scale[last];
  const double dR = d[last];

  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    const double A = (sol.phi_prime[i] * fz.U0(r) - sol.phi[i] * fz.U0p(r)) / d[i];
    double bracket = fz.U1(r) - fz.V1(r) * A;
    if (ell == 0) bracket += -fz.U0(r) * A * A / 2.0 + fz.V0(r) * A * A * A / 6.0;
    const double w = std::exp(sol.log_scale[i] - s_ref);
    g[i] = (sol.phi[i] * w / dR) * (d[i] * w / dR) * bracket;
  }
  const PotentialSamples v = sample_potential(pot, grid);
  const double B = -2.0 * integrate(grid, times_potential(v, g, grid));
  const double a = limit_form(sol, fz, last);
  const double R = grid.r_max();

  auto tail = [&](double b) {
    if (ell == 0)
      return tail_integral(pot, R, [&](double r) {
        const double x = r - a;
        return x * x * x * x / 3.0 - 2.0 * b * x;
      });
    return -2.0 * tail_integral(pot, R, [&](double r) {
      return (fz.U0(r) - a * fz.V0(r)) * (fz.U1(r) + fz.V0(r) * b - fz.V1(r) * a);
    });
  };
  out.variable_phase_form = B;
  out.tail_correction = tail(B);

  out.product_form = std::numeric_limits<double>::quiet_NaN();
  if (ell == 0 && sol.log_scale.front() == s_ref) {
    std::vector<double> sq(n);
    kernels::hadamard(sol.phi.data(), sol.phi.data(), sq.data(), n);
    const std::vector<double> c = cumulative(grid, sq);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = sol.phi[i], yp = sol.phi_prime[i];
      const double q = y / yp;
      h[i] = q * q * q * q - 2.0 * q * c[i] / (yp * yp);
    }
    out.product_form = integrate(grid, times_potential(v, h, grid)) + out.tail_correction;
  }
  out.b = Quantity::of(B + out.tail_correction);
  return out;
}

BCoefficientResult b_coefficient(const PotentialSpec& pot, int ell) {
  return b_coefficient(pot, ell, make_grid(pot));
}

double effective_range(double a, double b, int ell) {
  if (a == 0.0) throw DomainError("a = 0: effective range undefined");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("effective range needs finite a and b");
  return ell == 0 ? 2.0 * a / 3.0 - 2.0 * b / (a * a) : -2.0 * b / (a * a);
}

EffectiveRangeResult direct_effective_range(const PotentialSpec& pot, int ell) {
  return direct_effective_range(pot, ell, make_grid(pot));
}

EffectiveRangeResult direct_effective_range(const PotentialSpec& pot, int ell, const RadialGrid& grid) {
  EffectiveRangeResult out;
  out.ell = ell;
  out.method = "direct_integral";
  const ScatteringLengthResult sl = scattering_length(pot, ell, grid);
  out.a = sl.a;
  out.a_consistency = sl.relative_disagreement;
  if (!sl.a.finite) {
    out.b = Quantity::not_defined("a divergent");
    out.r_eff = Quantity::not_defined("a divergent");
    return out;
  }
  const BCoefficientResult bc = b_coefficient(pot, ell, grid);
  out.b = bc.b;
  if (!bc.b.finite) {
    out.r_eff = Quantity::divergent(bc.b.predicted_exponent, bc.b.note);
    out.r_eff.evidence = bc.b.evidence;
    return out;
  }
  if (sl.a.value == 0.0) {
    out.r_eff = Quantity::not_defined("a=0: undefined");
    return out;
  }
  out.r_eff = Quantity::of(effective_range(sl.a.value, bc.b.value, ell));
  return out;
}

std::optional<double> nonanalytic_power(const PotentialSpec& pot, int ell) {
  const auto s = power_exponent(pot);
  if (!s) return std::nullopt;
  const double p = *s - 3.0 - 2.0 * ell;
  if (p > 2.0 && p < 4.0) return p;
  return std::nullopt;
}

std::vector<double> default_low_k_grid(const PotentialSpec& pot) {
  const double scale = range_scale(pot);
  std::vector<double> ks;
  constexpr int kPoints = 64;
  const double lo = std::log(1e-4 / scale), hi = std::log(0.1 / scale);
  for (int i = 0; i < kPoints; ++i) ks.push_back(std::exp(lo + (hi - lo) * i / (kPoints - 1)));
  return ks;
}

EffectiveRangeResult low_k_expansion(const PhaseShiftCurve& curve, int levinson_n,
                                     std::optional<double> power, LowKFitOptions opt) {
  opt.ell = curve.ell;
  opt.levinson_n = levinson_n;
  opt.nonanalytic_power = power;
  const LowKFit fit = fit_effective_range(curve.k_values, curve.delta, opt);
  EffectiveRangeResult out;
  out.ell = curve.ell;
  out.method = "low_k_fit";
  out.fit = fit;
  if (fit.intercept == 0.0) {
    out.a = Quantity::not_defined("fit intercept is zero");
    out.b = out.r_eff = Quantity::not_defined("a undefined");
    return out;
  }
  const double a = -1.0 / fit.intercept;
  const double r = 2.0 * fit.slope;
  out.a = Quantity::of(a);
  out.r_eff = Quantity::of(r);
  out.b = Quantity::of(curve.ell == 0 ? a * a * a / 3.0 - a * a * r / 2.0 : -a * a * r / 2.0);
  return out;
}

EffectiveRangeResult low_k_expansion(const PotentialSpec& pot, int ell, const std::vector<double>& k_grid,
                                     LowKFitOptions options) {
  int n = 0;
  if (!is_nonnegative(pot)) n = static_cast<int>(bound_states(pot, ell, make_grid(pot)).gammas.size());
  const PhaseShiftCurve curve = phase_shift_curve(pot, ell, k_grid, PhaseMethod::asymptotic_matching);
  EffectiveRangeResult out = low_k_expansion(curve, n, nonanalytic_power(pot, ell), options);
  try {
    const Finiteness fin = predict_finiteness(pot, ell);
    const double s = power_exponent(pot).value_or(0.0);
    if (!fin.a_finite) {
      out.a = Quantity::divergent(2.0 * ell + 3.0 - s, "r^(2l+2) V not integrable; fitted value unreliable");
      out.b = out.r_eff = Quantity::not_defined("a divergent");
    } else if (!fin.r_finite) {
      out.b = Quantity::divergent(2.0 * ell + 5.0 - s, "r^(2l+4) V not integrable; fitted value unreliable");
      out.r_eff = out.b;
    }
  } catch (const IndeterminateError&) {
  }
  return out;
}

LevinsonResult levinson(const PotentialSpec& pot, int ell, const RadialGrid& grid, double k_min) {
  require_momentum(k_min);
  LevinsonResult out;
  const RadialSolution zero = solve_regular(pot, 0.0, ell, grid, {false});
  const ZeroEnergyAmplitudes amp = zero_energy_amplitudes(zero, zero.size() - 1);
  const double R = grid.r_max();
  const double grow = amp.growing * std::pow(R, ell + 1.0);
  const double decay = amp.decaying * std::pow(R, -ell);
  out.resonance_indicator = std::abs(grow) / std::hypot(grow, decay);
  if (out.resonance_indicator < 1e-6)
    throw ResonanceError("zero-energy resonance: the regular solution has no growing component at r_max");
  out.resonance_flag = out.resonance_indicator < 1e-2;

  const BoundStateSpectrum bs = bound_states(pot, ell, grid);
  out.n = static_cast<int>(bs.gammas.size());
  out.node_count = bs.node_count;
  out.gammas = bs.gammas;
  out.delta_at_kmin = phase_shift_matching(pot, k_min, ell, grid);
  out.residual = std::abs(out.delta_at_kmin - out.n * pi);
  return out;
}

LevinsonResult levinson(const PotentialSpec& pot, int ell, double k_min) {
  return levinson(pot, ell, make_grid(pot), k_min);
}

PhaseShiftCurve subtracted_phase(const PhaseShiftCurve& curve, const std::vector<double>& gammas) {
  for (double g : gammas)
    if (!(g > 0.0)) throw DomainError("binding momenta must be positive");
  PhaseShiftCurve out = curve;
  for (std::size_t i = 0; i < out.delta.size(); ++i)
    for (double g : gammas) out.delta[i] -= 2.0 * std::atan(g / out.k_values[i]);
  out.max_adjacent_jump = 0.0;
  for (std::size_t i = 1; i < out.delta.size(); ++i)
    out.max_adjacent_jump = std::max(out.max_adjacent_jump, std::abs(out.delta[i] - out.delta[i - 1]));
  out.branch_continuous = out.max_adjacent_jump < pi / 2;
  return out;
}

BarredCoefficients barred_coefficients(double a, double b, const std::vector<double>& gammas) {
  BarredCoefficients out{a, b};
  for (double g : gammas) {
    if (!(g > 0.0)) throw DomainError("binding momenta must be positive");
    out.a_bar -= 2.0 / g;
    out.b_bar -= 2.0 / (3.0 * g * g * g);
  }
  return out;
}

double identity_residual(const PotentialSpec& pot, double k, int ell, const RadialGrid& grid) {
  require_momentum(k);
  const RadialSolution phi = solve_regular(pot, k, ell, grid, {false});
  const RadialSolution phi0 = solve_regular(pot, 0.0, ell, grid, {false});
  const std::size_t n = phi.size();
  std::vector<double> prod(n), mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    prod[i] = phi.value(i) * phi0.value(i);
    mag[i] = std::abs(prod[i]);
  }
  const std::vector<double> rhs = cumulative(grid, prod);
  const std::vector<double> scale = cumulative(grid, mag);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = phi.value(i) * phi0.derivative(i) - phi0.value(i) * phi.derivative(i);
    worst = std::max(worst, std::abs(w - k * k * rhs[i]) / (1.0 + k * k * scale[i]));
  }
  if (!std::isfinite(worst)) throw NumericError("identity residual overflowed");
  return worst;
}

}  // namespace erange
