#include "erange/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "erange/errors.hpp"

namespace erange {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError("invalid potential: " + what);
}

void validate(const PotentialSpec::Model& model) {
  std::visit(overloaded{
                 [](const SquareBarrier& m) {
                   require(std::isfinite(m.height) && m.height >= 0.0, "barrier height must be >= 0");
                   require(std::isfinite(m.radius) && m.radius > 0.0, "barrier radius must be > 0");
                 },
                 [](const SquareWell& m) {
                   require(std::isfinite(m.depth) && m.depth >= 0.0, "well depth must be >= 0");
                   require(std::isfinite(m.radius) && m.radius > 0.0, "well radius must be > 0");
                 },
                 [](const PowerTail& m) {
                   require(std::isfinite(m.amplitude), "power tail amplitude must be finite");
                   require(std::isfinite(m.core) && m.core > 0.0, "power tail core must be > 0");
                   require(std::isfinite(m.exponent) && m.exponent > 2.0,
                           "power tail exponent must be > 2 (r V(r) must be integrable)");
                 },
                 [](const ExponentialTail& m) {
                   require(std::isfinite(m.amplitude), "exponential amplitude must be finite");
                   require(std::isfinite(m.rate) && m.rate > 0.0, "exponential rate must be > 0");
                 },
                 [](const Tabulated& m) {
                   require(m.nodes.size() >= 2, "tabulated potential needs at least two nodes");
                   require(m.nodes.size() == m.values.size(), "nodes and values differ in length");
                   require(m.nodes.front() >= 0.0, "tabulated nodes must be >= 0");
                   for (std::size_t i = 1; i < m.nodes.size(); ++i)
                     require(m.nodes[i] > m.nodes[i - 1], "tabulated nodes must be strictly ascending");
                   for (double v : m.values) require(std::isfinite(v), "tabulated values must be finite");
                   if (m.tail == TailKind::power)
                     require(std::isfinite(m.tail_exponent) && m.tail_exponent > 2.0,
                             "tabulated tail exponent must be > 2");
                 },
                 [](const TruncatedAt& m) {
                   require(m.inner != nullptr, "truncated potential needs an inner model");
                   require(std::isfinite(m.cutoff_radius) && m.cutoff_radius > 0.0,
                           "cutoff radius must be > 0");
                 },
             },
             model);
}

double tabulated_value(const Tabulated& t, double r) {
  const auto& x = t.nodes;
  const auto& y = t.values;
  if (r <= x.front()) return y.front();
  if (r >= x.back()) {
    if (r == x.back()) return y.back();
    if (t.tail == TailKind::power) return y.back() * std::pow(r / x.back(), -t.tail_exponent);
    return 0.0;
  }
  auto it = std::upper_bound(x.begin(), x.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (r - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

}  // namespace

PotentialSpec::PotentialSpec(Model model) : model_(std::move(model)) { validate(model_); }

PotentialSpec PotentialSpec::square_barrier(double height, double radius) {
  return PotentialSpec(SquareBarrier{height, radius});
}
PotentialSpec PotentialSpec::square_well(double depth, double radius) {
  return PotentialSpec(SquareWell{depth, radius});
}
PotentialSpec PotentialSpec::power_tail(double amplitude, double core, double exponent) {
  return PotentialSpec(PowerTail{amplitude, core, exponent});
}
PotentialSpec PotentialSpec::exponential_tail(double amplitude, double rate) {
  return PotentialSpec(ExponentialTail{amplitude, rate});
}
PotentialSpec PotentialSpec::tabulated(std::vector<double> nodes, std::vector<double> values,
                                       TailKind tail, double tail_exponent) {
  return PotentialSpec(Tabulated{std::move(nodes), std::move(values), tail, tail_exponent});
}
PotentialSpec PotentialSpec::truncated(const PotentialSpec& inner, double cutoff_radius) {
  return PotentialSpec(TruncatedAt{std::make_shared<const PotentialSpec>(inner), cutoff_radius});
}

double PotentialSpec::operator()(double r) const noexcept {
  return std::visit(overloaded{
                        [r](const SquareBarrier& m) { return r < m.radius ? m.height : 0.0; },
                        [r](const SquareWell& m) { return r < m.radius ? -m.depth : 0.0; },
                        [r](const PowerTail& m) { return m.amplitude * std::pow(m.core + r, -m.exponent); },
                        [r](const ExponentialTail& m) { return m.amplitude * std::exp(-m.rate * r); },
                        [r](const Tabulated& m) { return tabulated_value(m, r); },
                        [r](const TruncatedAt& m) { return r <= m.cutoff_radius ? (*m.inner)(r) : 0.0; },
                    },
                    model_);
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const SquareBarrier& m) { os << "square_barrier{height=" << m.height << ", radius=" << m.radius << "}"; },
                 [&](const SquareWell& m) { os << "square_well{depth=" << m.depth << ", radius=" << m.radius << "}"; },
                 [&](const PowerTail& m) {
                   os << "power_tail{amplitude=" << m.amplitude << ", core=" << m.core << ", s=" << m.exponent << "}";
                 },
                 [&](const ExponentialTail& m) { os << "exponential_tail{amplitude=" << m.amplitude << ", rate=" << m.rate << "}"; },
                 [&](const Tabulated& m) { os << "tabulated{" << m.nodes.size() << " nodes}"; },
                 [&](const TruncatedAt& m) { os << "truncated{" << m.inner->describe() << ", cutoff=" << m.cutoff_radius << "}"; },
             },
             model_);
  return os.str();
}

double evaluate(const PotentialSpec& spec, double r) {
  if (!(r >= 0.0)) throw DomainError("potential evaluated at negative radius");
  return spec(r);
}

double evaluate_left(const PotentialSpec& spec, double r) {
  if (!(r >= 0.0)) throw DomainError("potential evaluated at negative radius");
  if (r == 0.0) return spec(0.0);
  // Truncation is closed on the left (V(cutoff) = inner(cutoff)), steps are open.
  return spec(std::nextafter(r, 0.0));
}

double tail_exponent(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareBarrier&) { return kInf; },
                        [](const SquareWell&) { return kInf; },
                        [](const PowerTail& m) { return m.amplitude == 0.0 ? kInf : m.exponent; },
                        [](const ExponentialTail&) { return kInf; },
                        [](const Tabulated& m) {
                          switch (m.tail) {
                            case TailKind::compact: return kInf;
                            case TailKind::power: return m.values.back() == 0.0 ? kInf : m.tail_exponent;
                            case TailKind::unspecified: break;
                          }
                          throw IndeterminateError(
                              "tabulated potential has no tail metadata; use a truncation scan instead");
                        },
                        [](const TruncatedAt&) { return kInf; },
                    },
                    spec.model());
}

bool integrability_class(const PotentialSpec& spec, int p) {
  if (p < 1 || p > 6) throw DomainError("integrability power must be in 1..6");
  // Near the origin every model is bounded, so only the tail decides.
  return tail_exponent(spec) > p + 1.0;
}

Finiteness predict_finiteness(const PotentialSpec& spec, int ell) {
  if (ell < 0) throw DomainError("angular momentum must be >= 0");
  const int pa = 2 * ell + 2;
  const int pr = 2 * ell + 4;
  // Beyond p = 6 integrability_class is out of its table; decide from the exponent directly.
  const double s = tail_exponent(spec);
  Finiteness f;
  f.a_finite = pa <= 6 ? integrability_class(spec, pa) : s > pa + 1.0;
  f.r_finite = f.a_finite && (pr <= 6 ? integrability_class(spec, pr) : s > pr + 1.0);
  return f;
}

double sign_constant_beyond(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareBarrier& m) { return m.radius; },
                        [](const SquareWell& m) { return m.radius; },
                        [](const PowerTail&) { return 0.0; },
                        [](const ExponentialTail&) { return 0.0; },
                        [](const Tabulated& m) {
                          // Last sign change in the data; the extrapolated tail keeps the last sign.
                          double r = 0.0;
                          for (std::size_t i = 1; i < m.values.size(); ++i)
                            if (m.values[i] * m.values[i - 1] < 0.0 ||
                                (m.values[i] == 0.0) != (m.values[i - 1] == 0.0))
                              r = m.nodes[i];
                          return r;
                        },
                        [](const TruncatedAt& m) {
                          return std::min(m.cutoff_radius, sign_constant_beyond(*m.inner));
                        },
                    },
                    spec.model());
}

std::vector<double> breakpoints(const PotentialSpec& spec) {
  std::vector<double> out = std::visit(
      overloaded{
          [](const SquareBarrier& m) { return std::vector<double>{m.radius}; },
          [](const SquareWell& m) { return std::vector<double>{m.radius}; },
          [](const PowerTail&) { return std::vector<double>{}; },
          [](const ExponentialTail&) { return std::vector<double>{}; },
          [](const Tabulated& m) {
            std::vector<double> v;
            if (m.nodes.size() <= 2000) {
              for (double x : m.nodes)
                if (x > 0.0) v.push_back(x);
            } else if (m.nodes.back() > 0.0) {
              v.push_back(m.nodes.back());
            }
            return v;
          },
          [](const TruncatedAt& m) {
            std::vector<double> v;
            for (double x : breakpoints(*m.inner))
              if (x < m.cutoff_radius) v.push_back(x);
            v.push_back(m.cutoff_radius);
            return v;
          },
      },
      spec.model());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double range_scale(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareBarrier& m) { return m.radius; },
                        [](const SquareWell& m) { return m.radius; },
                        [](const PowerTail& m) { return m.core; },
                        [](const ExponentialTail& m) { return 1.0 / m.rate; },
                        [](const Tabulated& m) { return m.nodes.back(); },
                        [](const TruncatedAt& m) { return std::min(range_scale(*m.inner), m.cutoff_radius); },
                    },
                    spec.model());
}

std::optional<double> support_radius(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareBarrier& m) -> std::optional<double> {
                          return m.height == 0.0 ? 0.0 : m.radius;
                        },
                        [](const SquareWell& m) -> std::optional<double> {
                          return m.depth == 0.0 ? 0.0 : m.radius;
                        },
                        [](const PowerTail& m) -> std::optional<double> {
                          if (m.amplitude == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const ExponentialTail& m) -> std::optional<double> {
                          if (m.amplitude == 0.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const Tabulated& m) -> std::optional<double> {
                          if (m.tail == TailKind::power && m.values.back() != 0.0) return std::nullopt;
                          return m.nodes.back();
                        },
                        [](const TruncatedAt& m) -> std::optional<double> {
                          auto inner = support_radius(*m.inner);
                          return inner ? std::min(*inner, m.cutoff_radius) : m.cutoff_radius;
                        },
                    },
                    spec.model());
}

bool is_nonnegative(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareBarrier&) { return true; },
                        [](const SquareWell& m) { return m.depth == 0.0; },
                        [](const PowerTail& m) { return m.amplitude >= 0.0; },
                        [](const ExponentialTail& m) { return m.amplitude >= 0.0; },
                        [](const Tabulated& m) {
                          return std::all_of(m.values.begin(), m.values.end(), [](double v) { return v >= 0.0; });
                        },
                        [](const TruncatedAt& m) { return is_nonnegative(*m.inner); },
                    },
                    spec.model());
}

double max_abs_on(const PotentialSpec& spec, double a, double b) {
  if (b < a) std::swap(a, b);
  double m = std::max(std::abs(spec(a)), std::abs(evaluate_left(spec, b)));
  constexpr int kSamples = 64;
  for (int i = 1; i < kSamples; ++i) m = std::max(m, std::abs(spec(a + (b - a) * i / kSamples)));
  for (double x : breakpoints(spec))
    if (x > a && x < b) m = std::max({m, std::abs(spec(x)), std::abs(evaluate_left(spec, x))});
  return m;
}

namespace {

// Integral of f over [from, inf), split at the breakpoints of V and clipped to its support.
double integrate_beyond(const PotentialSpec& spec, double from, const std::function<double(double)>& f) {
  std::vector<double> cuts{from};
  for (double x : breakpoints(spec))
    if (x > from) cuts.push_back(x);
  const auto support = support_radius(spec);
  if (support) {
    while (!cuts.empty() && cuts.back() > *support) cuts.pop_back();
    if (cuts.empty() || *support <= from) return 0.0;
    if (cuts.back() < *support) cuts.push_back(*support);
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-14);
  if (!support) {
    boost::math::quadrature::exp_sinh<double> es;
    total += es.integrate(f, cuts.back(), kInf, 1e-13);
  }
  return total;
}

}  // namespace

double tail_integral(const PotentialSpec& spec, double from,
                     const std::function<double(double)>& weight) {
  if (!(from >= 0.0)) throw DomainError("tail integral needs a non-negative lower limit");
  return integrate_beyond(spec, from, [&](double r) {
    const double v = spec(r);
    return v == 0.0 ? 0.0 : v * weight(r);
  });
}

double tail_moment_abs(const PotentialSpec& spec, double from, double p) {
  if (!(from >= 0.0)) throw DomainError("tail integral needs a non-negative lower limit");
  return integrate_beyond(spec, from, [&](double r) {
    const double v = spec(r);
    return v == 0.0 ? 0.0 : std::abs(v) * std::pow(r, p);
  });
}

double tail_radius(const PotentialSpec& spec, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tail tolerance must be positive");
  if (auto s = support_radius(spec)) return *s;
  double lo = std::max(range_scale(spec), 1e-3);
  if (tail_moment_abs(spec, lo, 1.0) < tolerance) return lo;
  double hi = 2.0 * lo;
  while (tail_moment_abs(spec, hi, 1.0) >= tolerance) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e30) throw PreconditionError("potential tail too slow for the requested tail tolerance");
  }
  while (hi / lo > 1.01) {
    const double mid = std::sqrt(lo * hi);
    (tail_moment_abs(spec, mid, 1.0) < tolerance ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace erange
