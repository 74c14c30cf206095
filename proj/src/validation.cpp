#include "erange/validation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "erange/errors.hpp"
#include "erange/observables.hpp"
#include "erange/parallel.hpp"
#include "erange/radial.hpp"
#include "erange/scans.hpp"
#include "erange/special.hpp"

namespace erange {

namespace {

using std::numbers::pi;

Check make(std::string module, std::string name, double measured, double limit, std::string detail = {}) {
  Check c;
  c.module = std::move(module);
  c.name = std::move(name);
  c.measured = measured;
  c.limit = limit;
  c.passed = measured < limit;  // false for NaN
  c.detail = std::move(detail);
  return c;
}

// Largest value seen together with the label of where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;
  std::mutex lock;

  void update(double v, const std::string& label) {
    std::lock_guard<std::mutex> g(lock);
    if (where.empty() || std::isnan(v) || v > value) {  // a NaN sticks
      value = v;
      where = label;
    }
  }
};

std::string label(const std::string& name, int ell, double x = std::nan("")) {
  std::ostringstream os;
  os << name << " l=" << ell;
  if (!std::isnan(x)) os << " x=" << x;
  return os.str();
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

std::vector<NamedPotential> nonnegative_references() {
  std::vector<NamedPotential> out;
  for (auto& p : reference_potentials())
    if (is_nonnegative(p.spec)) out.push_back(p);
  return out;
}

// Integral of r |V| over [0, X]: Gauss panels of width ~ r / 4, split at the breakpoints of V.
double moment_to(const PotentialSpec& pot, double X) {
  std::vector<double> cuts{0.0};
  for (double b : breakpoints(pot))
    if (b > 0.0 && b < X) cuts.push_back(b);
  cuts.push_back(X);
  auto f = [&](double r) { return r * std::abs(pot(r)); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    for (double a = cuts[i]; a < cuts[i + 1];) {
      const double b = std::min(cuts[i + 1], a + std::max(0.25, 0.25 * a));
      total += boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
      a = b;
    }
  return total;
}

}  // namespace

std::vector<NamedPotential> reference_potentials() {
  std::vector<double> nodes, values;
  for (int i = 0; i <= 40; ++i) {
    nodes.push_back(0.05 * i);
    values.push_back(3.0 * (1.0 - 0.025 * i));
  }
  return {
      {"square_barrier{4,1}", PotentialSpec::square_barrier(4.0, 1.0)},
      {"square_well{5,1}", PotentialSpec::square_well(5.0, 1.0)},
      {"square_well{30,1}", PotentialSpec::square_well(30.0, 1.0)},
      {"power_tail{1,1,6}", PotentialSpec::power_tail(1.0, 1.0, 6.0)},
      {"exponential_tail{2,1}", PotentialSpec::exponential_tail(2.0, 1.0)},
      {"tabulated_triangle{3,2}", PotentialSpec::tabulated(nodes, values, TailKind::compact)},
      {"truncated{power_tail{1,1,4},10}",
       PotentialSpec::truncated(PotentialSpec::power_tail(1.0, 1.0, 4.0), 10.0)},
  };
}

std::vector<Check> validate_potential() {
  std::vector<Check> out;

  int violations = 0;
  for (double s = 2.25; s <= 10.0; s += 0.25) {
    const PotentialSpec pot = PotentialSpec::power_tail(1.0, 1.0, s);
    for (int p = 2; p <= 6; ++p)
      if (integrability_class(pot, p) && !integrability_class(pot, p - 1)) ++violations;
  }
  out.push_back(make("potential", "integrability class monotone in p", violations, 0.5,
                     "power tails s = 2.25..10, p = 1..6"));

  int mismatches = 0;
  for (const auto& ref : reference_potentials()) {
    const double R = 1.7 * range_scale(ref.spec);
    const PotentialSpec cut = PotentialSpec::truncated(ref.spec, R);
    for (int i = 0; i <= 300; ++i) {
      const double r = 3.0 * R * i / 300.0;
      const double want = r <= R ? evaluate(ref.spec, r) : 0.0;
      if (evaluate(cut, r) != want) ++mismatches;
    }
    if (evaluate(cut, R) != evaluate(ref.spec, R)) ++mismatches;
  }
  out.push_back(make("potential", "truncation agrees on [0,R] and vanishes beyond", mismatches, 0.5));

  double worst_ratio = 0.0;
  std::string where;
  for (const auto& ref : reference_potentials()) {
    const double scale = range_scale(ref.spec);
    double prev = moment_to(ref.spec, 2.0 * scale);
    double prev_step = -1.0;
    for (int j = 2; j <= 9; ++j) {
      const double cur = moment_to(ref.spec, std::ldexp(scale, j));
      const double step = std::abs(cur - prev);
      if (prev_step > 1e-13 * std::abs(cur) && step > 1e-13 * std::abs(cur)) {
        const double ratio = step / prev_step;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          where = ref.name;
        }
      }
      prev = cur;
      prev_step = step;
    }
  }
  out.push_back(make("potential", "int_0^X r|V| converges geometrically under doubling", worst_ratio, 1.0,
                     where.empty() ? "" : "worst: " + where));
  return out;
}

std::vector<Check> validate_special() {
  std::vector<Check> out;
  const std::vector<double> xs = log_space(1e-3, 1e3, 100);

  double worst = 0.0;
  std::string where;
  for (int l = 0; l <= kDefaultEllMax; ++l)
    for (double x : xs) {
      const RiccatiBesselValues f = riccati_bessel(l, x);
      const double dev = std::abs(f.u_prime * f.v - f.u * f.v_prime - 1.0);
      if (!(dev <= worst)) {
        worst = dev;
        where = label("riccati_bessel", l, x);
      }
    }
  out.push_back(make("special", "u'v - uv' = 1, l = 0..10", worst, 1e-12, where));

  worst = 0.0;
  where.clear();
  for (Recurrence dir : {Recurrence::upward, Recurrence::downward})
    for (double x : log_space(0.5, 50.0, 100))
      for (int l = 0; l <= 1; ++l) {
        const RiccatiBesselValues f = riccati_bessel(l, x, kDefaultEllMax, dir);
        const double s = std::sin(x), c = std::cos(x);
        const double u = l == 0 ? s : s / x - c;
        const double v = l == 0 ? c : c / x + s;
        const double up = l == 0 ? c : c / x - s / (x * x) + s;
        const double vp = l == 0 ? -s : -s / x - c / (x * x) + c;
        const double dev = std::max({std::abs(f.u - u), std::abs(f.v - v), std::abs(f.u_prime - up),
                                     std::abs(f.v_prime - vp)}) /
                           std::max(1.0, std::abs(v));
        if (!(dev <= worst)) {
          worst = dev;
          where = label(dir == Recurrence::upward ? "upward" : "downward", l, x);
        }
      }
  out.push_back(make("special", "both recurrences match closed forms at l = 0, 1", worst, 1e-12, where));

  worst = 0.0;
  for (double k : {0.05, 0.7, 3.0, 11.0})
    for (double r : log_space(1e-3, 40.0, 60)) {
      const double phi = std::sin(1.3 * r) + 0.2 * r * r + std::exp(-r);
      const double dphi = 1.3 * std::cos(1.3 * r) + 0.4 * r - std::exp(-r);
      const RiccatiBesselValues f = riccati_bessel(0, k * r);
      const double nu = k * f.u_prime * phi - f.u * dphi;
      const double nv = k * f.v_prime * phi - f.v * dphi;
      const double want = dphi * dphi + k * k * phi * phi;
      worst = std::max(worst, std::abs(nu * nu + nv * nv - want) / want);
    }
  out.push_back(make("special", "l = 0 denominator reduces to phi'^2 + k^2 phi^2", worst, 1e-10));
  return out;
}

std::vector<Check> validate_radial() {
  std::vector<Check> out;
  const std::vector<NamedPotential> refs = reference_potentials();

  {
    Worst w;
    parallel_for(refs.size() * 2, [&](std::size_t job) {
      const auto& ref = refs[job / 2];
      const int l = static_cast<int>(job % 2);
      const RadialGrid grid = make_grid(ref.spec);
      const RadialSolution ode = solve_regular(ref.spec, 0.0, l, grid, {false});
      const RadialSolution vol = solve_zero_regular_volterra(ref.spec, l, grid);
      double diff = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        diff = std::max(diff, std::abs(ode.value(i) - vol.value(i)));
        norm = std::max(norm, std::abs(ode.value(i)));
      }
      w.update(diff / norm, label(ref.name, l));
    });
    out.push_back(make("radial", "Volterra iteration equals ODE solution (sup-norm)", w.value, 1e-8,
                       "worst: " + w.where));
  }

  {
    Worst w;
    parallel_for(refs.size() * 3, [&](std::size_t job) {
      const auto& ref = refs[job / 3];
      const int l = static_cast<int>(job % 3);
      const RadialGrid grid = make_grid(ref.spec);
      const RadialSolution phi0 = normalize_at_infinity(solve_regular(ref.spec, 0.0, l, grid, {false}));
      const RadialSolution chi0 = solve_zero_bounded(ref.spec, l, grid);
      const WronskianResult wr = wronskian(phi0, chi0);
      double dev = 0.0;
      for (double x : wr.values) dev = std::max(dev, std::abs(x - (2.0 * l + 1.0)));
      w.update(dev, label(ref.name, l));
    });
    out.push_back(make("radial", "W(phi0, chi0) = 2l+1 at every node, l = 0..2", w.value, 1e-7,
                       "worst: " + w.where));
  }

  {
    int violations = 0;
    std::string where;
    for (const auto& ref : nonnegative_references()) {
      const RadialGrid grid = make_grid(ref.spec);
      const RadialSolution phi0 = solve_regular(ref.spec, 0.0, 0, grid, {false});
      const RadialSolution chi0 = solve_zero_bounded(ref.spec, 0, grid);
      const std::size_t n = grid.size();
      int bad = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = phi0.value(i), dp = phi0.derivative(i);
        const double c = chi0.value(i), dc = chi0.derivative(i);
        const double tol = 1e-12 * std::max(1.0, std::abs(dp));
        if (dp < 1.0 - 1e-12 || p <= 0.0) ++bad;  // increasing, slope at least 1
        if (c <= 0.0 || dc > 1e-12 * std::max(1.0, std::abs(c))) ++bad;
        if (i > 0) {
          if (phi0.derivative(i - 1) > dp + tol) ++bad;  // convex: slope non-decreasing
          if (chi0.derivative(i - 1) > dc + 1e-12 * std::max(1.0, std::abs(dc))) ++bad;
        }
      }
      if (std::abs(chi0.value(n - 1) - 1.0) > 1e-6) ++bad;
      if (bad > 0) where += (where.empty() ? "" : ", ") + ref.name;
      violations += bad;
    }
    out.push_back(make("radial", "V >= 0: phi0 increasing convex, chi0 positive decreasing convex", violations,
                       0.5, where));
  }

  {
    double worst_ratio = 0.0;
    std::string where;
    std::ostringstream forms;
    for (const auto& ref : nonnegative_references()) {
      if (!integrability_class(ref.spec, 2)) continue;
      const double R0 = default_r_max(ref.spec);
      std::vector<double> slopes;
      ZeroEnergySlope last;
      for (int j = 0; j < 4; ++j) {
        GridSpec gs;
        gs.r_max = std::ldexp(R0, j);
        last = zero_energy_slope(ref.spec, make_grid(ref.spec, gs));
        slopes.push_back(last.slope_at_rmax);
      }
      for (std::size_t j = 2; j < slopes.size(); ++j) {
        const double d1 = std::abs(slopes[j - 1] - slopes[j - 2]);
        const double d2 = std::abs(slopes[j] - slopes[j - 1]);
        const double floor = 1e-12 * std::abs(slopes[j]);
        if (d1 <= floor && d2 <= floor) continue;
        const double ratio = d2 / std::max(d1, floor);
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          where = ref.name;
        }
      }
      forms << ref.name << ": phi0'(inf)=" << last.slope_at_rmax << " 1+int V phi0=" << last.volterra_slope
            << " int r V phi0=" << last.first_moment << "; ";
    }
    out.push_back(make("radial", "phi0'(R_max) Cauchy-convergent as R_max doubles", worst_ratio, 1.0,
                       (where.empty() ? "" : "worst: " + where + "; ") + forms.str()));
  }

  {
    Worst w;
    const std::vector<double> ks{0.1, 1.0};
    parallel_for(refs.size() * ks.size(), [&](std::size_t job) {
      const auto& ref = refs[job / ks.size()];
      const double k = ks[job % ks.size()];
      const double res = identity_residual(ref.spec, k, 0, phase_grid(ref.spec, k));
      w.update(res, label(ref.name, 0, k));
    });
    out.push_back(make("radial", "phi phi0' - phi0 phi' = k^2 int phi phi0 (normalized)", w.value, 1e-8,
                       "worst: " + w.where));
  }

  {
    int mismatches = 0;
    std::string detail;
    for (double depth : {1.0, 5.0, 15.0, 30.0, 50.0, 70.0}) {
      const PotentialSpec well = PotentialSpec::square_well(depth, 1.0);
      const int expected = static_cast<int>(std::floor(std::sqrt(depth) / pi + 0.5));
      const RadialGrid grid = make_grid(well);
      const int nodes = count_zero_energy_nodes(solve_regular(well, 0.0, 0, grid, {false}));
      int found = -1;
      try {
        found = static_cast<int>(bound_states(well, 0, grid).gammas.size());
      } catch (const ConsistencyError&) {
      }
      if (nodes != expected || found != expected) {
        ++mismatches;
        detail += "depth " + std::to_string(depth) + " ";
      }
    }
    out.push_back(make("radial", "node count = bound-state count, wells across 0..3 thresholds", mismatches,
                       0.5, detail));
  }
  return out;
}

std::vector<Check> validate_observables() {
  std::vector<Check> out;
  const std::vector<NamedPotential> pos = nonnegative_references();
  const std::vector<double> ks = log_space(0.01, 10.0, 30);

  {
    Worst gap;
    Worst sign;
    parallel_for(pos.size() * 3, [&](std::size_t job) {
      const auto& ref = pos[job / 3];
      const int l = static_cast<int>(job % 3);
      const RadialGrid grid = phase_grid(ref.spec, ks.back());
      double worst = 0.0, positive = 0.0;
      for (double k : ks) {
        const double di = phase_shift_integral(ref.spec, k, l, grid);
        const double dm = phase_shift_matching(ref.spec, k, l, grid);
        worst = std::max(worst, std::abs(di - dm));
        positive = std::max(positive, di);
      }
      gap.update(worst, label(ref.name, l));
      sign.update(positive, label(ref.name, l));
    });
    out.push_back(make("observables", "integral and matching phase shifts agree, k in [0.01,10], l = 0..2",
                       gap.value, 1e-7, "worst: " + gap.where));
    Check c = make("observables", "V >= 0 implies delta <= 0", sign.value, 0.0, "largest delta: " + sign.where);
    c.passed = sign.value <= 0.0;
    out.push_back(c);
  }

  {
    double tri = 0.0, closure = 0.0;
    std::string tri_where, closure_where;
    for (const auto& ref : pos) {
      const double s = tail_exponent(ref.spec);
      if (!(s > 5.0)) continue;
      const ScatteringLengthResult sl = scattering_length(ref.spec, 0);
      const EffectiveRangeResult direct = direct_effective_range(ref.spec, 0);
      const EffectiveRangeResult fit = low_k_expansion(ref.spec, 0, default_low_k_grid(ref.spec));
      const double a1 = sl.integral_form, a2 = sl.limit_form, a3 = fit.a.value;
      const double gap = std::max({std::abs(a1 - a2) / std::abs(a1), std::abs(a1 - a3) / std::abs(a1),
                                   std::abs(a2 - a3) / std::abs(a2)});
      if (gap > tri) {
        tri = gap;
        tri_where = ref.name;
      }
      if (direct.r_eff.finite && fit.r_eff.finite) {
        const double rel = std::abs(direct.r_eff.value - fit.r_eff.value) / std::abs(direct.r_eff.value);
        if (rel > closure) {
          closure = rel;
          closure_where = ref.name;
        }
      }
    }
    out.push_back(make("observables", "a0 from integral, limit form and low-k fit agree pairwise", tri, 1e-4,
                       "worst: " + tri_where));
    out.push_back(make("observables", "r0 from a, b agrees with the low-k fit", closure, 1e-3,
                       "worst: " + closure_where));
  }

  {
    const PotentialSpec well = PotentialSpec::square_well(5.0, 1.0);
    const std::vector<double> gammas = bound_states(well, 0, make_grid(well)).gammas;
    const PhaseShiftCurve curve =
        phase_shift_curve(well, 0, default_low_k_grid(well), PhaseMethod::asymptotic_matching);
    const EffectiveRangeResult full = low_k_expansion(curve, static_cast<int>(gammas.size()), std::nullopt);
    const EffectiveRangeResult sub = low_k_expansion(subtracted_phase(curve, gammas), 0, std::nullopt);
    const double want = barred_coefficients(full.a.value, 0.0, gammas).a_bar;
    const double rel = std::abs(sub.a.value - want) / std::abs(want);
    std::ostringstream d;
    d.precision(10);
    d << "a0=" << full.a.value << " gamma1=" << (gammas.empty() ? 0.0 : gammas.front())
      << " a0bar(fit)=" << sub.a.value << " a0-2/gamma=" << want;
    out.push_back(make("observables", "subtracted-phase fit gives a0 - 2 sum 1/gamma", rel, 1e-2, d.str()));
  }

  {
    Worst w;
    const std::vector<NamedPotential> refs = reference_potentials();
    parallel_for(refs.size(), [&](std::size_t i) {
      const double k = 50.0 / range_scale(refs[i].spec);
      const double d = phase_shift_matching(refs[i].spec, k, 0, phase_grid(refs[i].spec, k));
      w.update(std::abs(d), refs[i].name);
    });
    out.push_back(make("observables", "|delta0(50/range)| < 0.02", w.value, 0.02, "worst: " + w.where));
  }
  return out;
}

std::vector<Check> validate_scans() {
  std::vector<Check> out;
  const std::vector<int> ells{0, 1};
  const std::vector<double> ss{2.5, 3.5, 4.5, 6.0, 10.0};
  const std::vector<double> base = theorem_scan_ladder();

  std::vector<double> dense, longer;
  // Ladders may not be finer than ratio 1.5, so twice the points also reach further out.
  for (int j = 0; j < 2 * static_cast<int>(base.size()) - 1; ++j) dense.push_back(base.front() * std::pow(1.5, j));
  for (double r = base.front(); r <= 2.0 * base.back() * (1.0 + 1e-12); r *= 2.0) longer.push_back(r);

  const TheoremMatrix m0 = theorem_matrix(ells, ss, 1.0, base);
  const TheoremMatrix m1 = theorem_matrix(ells, ss, 1.0, dense);
  const TheoremMatrix m2 = theorem_matrix(ells, ss, 1.0, longer);

  int flips = 0;
  double exponent_gap = 0.0;
  int insufficient = 0;
  std::string flip_where, exp_where, suff_where;
  for (std::size_t i = 0; i < m0.cells.size(); ++i) {
    const TheoremCell& c = m0.cells[i];
    const std::string name = "l=" + std::to_string(c.ell) + " s=" + std::to_string(c.s).substr(0, 4);
    if (!c.near_threshold)
      for (const TheoremMatrix* m : {&m1, &m2})
        if (m->cells[i].observed_a != c.observed_a || m->cells[i].observed_r != c.observed_r) {
          ++flips;
          flip_where += name + " ";
        }
    const double ta = 2.0 * c.ell + 3.0, tr = 2.0 * c.ell + 5.0;
    auto gap = [&](const ConvergenceScan& sc, double threshold) {
      if (sc.verdict != Verdict::divergent || std::abs(c.s - threshold) < 0.5) return;
      const double g = std::abs(sc.growth_exponent - sc.predicted_exponent);
      if (g > exponent_gap) {
        exponent_gap = g;
        exp_where = name;
      }
    };
    gap(c.scan_a, ta);
    if (c.r_scanned) gap(c.scan_r, tr);
    if (c.predicted_a && !(c.scan_a.increment_exponent < 0.0)) {
      ++insufficient;
      suff_where += name + " a ";
    }
    if (c.predicted_r && !(c.r_scanned && c.scan_r.increment_exponent < 0.0)) {
      ++insufficient;
      suff_where += name + " r ";
    }
  }
  out.push_back(make("scans", "theorem matrix matches predicted finiteness", m0.passed ? 0.0 : 1.0, 0.5));
  out.push_back(make("scans", "verdicts stable under denser and longer ladders", flips, 0.5, flip_where));
  out.push_back(make("scans", "divergence exponents within 0.1 of prediction", exponent_gap, 0.1,
                     exp_where.empty() ? "" : "worst: " + exp_where));
  out.push_back(make("scans", "predicted-finite cells converge with decaying increments", insufficient, 0.5,
                     suff_where));
  return out;
}

std::vector<Check> run_validation() {
  std::vector<Check> all;
  for (auto* suite : {&validate_potential, &validate_special, &validate_radial, &validate_observables,
                      &validate_scans}) {
    std::vector<Check> part = suite();
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace erange
