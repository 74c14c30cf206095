#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "erange/errors.hpp"
#include "erange/grid.hpp"
#include "erange/quadrature.hpp"
#include "erange/radial.hpp"

using namespace erange;
using std::numbers::pi;

TEST_CASE("grid puts nodes on breakpoints with 4k intervals per segment") {
  const auto pot = PotentialSpec::square_barrier(4, 1.3);
  const RadialGrid g = make_grid(pot);
  bool on_break = false;
  for (double r : g.nodes()) on_break = on_break || r == 1.3;
  CHECK(on_break);
  for (const Segment& s : g.segments()) CHECK((s.last - s.first) % 4 == 0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("quadrature integrates smooth functions across segments") {
  const RadialGrid g = make_grid(PotentialSpec::square_barrier(4, 1), {.r_max = 6.0});
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::cos(g[i]);
  const double exact = std::sin(6.0) - std::sin(g.r_min());
  CHECK(integrate(g, f) == doctest::Approx(exact).epsilon(1e-11));
  const auto c = cumulative(g, f);
  for (std::size_t i = 0; i < g.size(); i += 37)
    CHECK(std::abs(c[i] - (std::sin(g[i]) - std::sin(g.r_min()))) < 1e-11);
}

TEST_CASE("free solutions") {
  const auto free = PotentialSpec::free();
  const RadialGrid g = make_grid(free, {.r_max = 4.0});
  const auto s1 = solve_regular(free, 1.0, 0, g);
  for (std::size_t i = 0; i < g.size(); i += 50) CHECK(s1.value(i) == doctest::Approx(std::sin(g[i])).epsilon(1e-9));
  const auto s0 = solve_regular(free, 0.0, 0, g);
  for (std::size_t i = 0; i < g.size(); i += 50) CHECK(s0.value(i) == doctest::Approx(g[i]).epsilon(1e-10));
  const auto chi = solve_zero_bounded(free, 0, g);
  for (std::size_t i = 0; i < g.size(); i += 50) CHECK(chi.value(i) == doctest::Approx(1.0).epsilon(1e-12));
  const auto vol = solve_zero_regular_volterra(free, 0, g);
  for (std::size_t i = 0; i < g.size(); i += 50) CHECK(vol.value(i) == doctest::Approx(g[i]).epsilon(1e-10));
}

TEST_CASE("barrier zero-energy closed forms") {
  const auto pot = PotentialSpec::square_barrier(4, 1);
  const RadialGrid g = make_grid(pot);
  const auto phi = solve_regular(pot, 0.0, 0, g);
  const std::size_t at1 = g.locate(1.0);
  REQUIRE(g[at1] == 1.0);
  CHECK(phi.value(at1) == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-9));
  for (std::size_t i = 0; i < at1; i += 40)
    CHECK(phi.value(i) == doctest::Approx(std::sinh(2 * g[i]) / 2).epsilon(1e-9));
  const auto chi = solve_zero_bounded(pot, 0, g);
  CHECK(chi.value(0) == doctest::Approx(std::cosh(2.0 * (1.0 - g[0]))).epsilon(1e-12));
  for (std::size_t i = 0; i < at1; i += 40)
    CHECK(chi.value(i) == doctest::Approx(std::cosh(2 * (1 - g[i]))).epsilon(1e-8));
  const auto vol = solve_zero_regular_volterra(pot, 0, g);
  for (std::size_t i = 0; i < g.size(); i += 40)
    CHECK(std::abs(vol.value(i) - phi.value(i)) < 1e-8 * std::max(1.0, std::abs(phi.value(i))));
}

TEST_CASE("regular solution starts as r^(l+1)/(2l+1)!!") {
  const auto pot = PotentialSpec::power_tail(1, 1, 6);
  const RadialGrid g = make_grid(pot);
  for (int l = 0; l <= 3; ++l) {
    const auto s = solve_regular(pot, 0.5, l, g);
    const double expected = std::pow(g[0], l + 1) / std::tgamma(l + 1.5) * std::sqrt(pi) / std::pow(2.0, l + 1);
    CHECK(s.value(0) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("property: W(phi0, chi0) = 2l+1 at every node") {
  const std::vector<PotentialSpec> pots{PotentialSpec::square_barrier(4, 1), PotentialSpec::power_tail(1, 1, 5),
                                        PotentialSpec::power_tail(1, 1, 6), PotentialSpec::exponential_tail(2, 1)};
  for (const auto& pot : pots)
    for (int l = 0; l <= 2; ++l) {
      const RadialGrid g = make_grid(pot);
      const auto w = wronskian(normalize_at_infinity(solve_regular(pot, 0.0, l, g)), solve_zero_bounded(pot, l, g));
      for (double x : w.values) CHECK(std::abs(x - (2 * l + 1)) < 1e-7);
    }
}

TEST_CASE("wronskian rejects mismatched solutions") {
  const auto pot = PotentialSpec::square_barrier(4, 1);
  const RadialGrid g = make_grid(pot);
  CHECK_THROWS_AS(wronskian(solve_regular(pot, 0.0, 0, g), solve_regular(pot, 0.0, 1, g)), PreconditionError);
}

TEST_CASE("property: nodes count bound states") {
  // l = 0 thresholds at depth (2n-1)^2 pi^2 / 4
  for (double depth : {1.0, 2.4, 2.5, 5.0, 22.0, 22.5, 30.0, 61.0, 62.0}) {
    const auto pot = PotentialSpec::square_well(depth, 1);
    const RadialGrid g = make_grid(pot);
    const int expected = static_cast<int>(std::floor(std::sqrt(depth) / pi + 0.5));
    const auto zero = solve_regular(pot, 0.0, 0, g);
    CHECK(count_zero_energy_nodes(zero) == expected);
    CHECK(static_cast<int>(bound_states(pot, 0, g).gammas.size()) == expected);
  }
  CHECK(count_nodes(solve_regular(PotentialSpec::square_barrier(4, 1), 0.0, 0,
                                  make_grid(PotentialSpec::square_barrier(4, 1)))) == 0);
}

TEST_CASE("bound state energies solve the well's transcendental equation") {
  const auto pot = PotentialSpec::square_well(30, 1);
  const auto s = bound_states(pot, 0, make_grid(pot));
  REQUIRE(s.gammas.size() == 2);
  CHECK(s.gammas[0] == doctest::Approx(4.799609113180315932).epsilon(1e-10));
  CHECK(s.gammas[1] == doctest::Approx(2.021724021979897359).epsilon(1e-10));
  for (double g : s.gammas) {
    const double q = std::sqrt(30 - g * g);
    CHECK(std::abs(q / std::tan(q) + g) < 1e-8);
  }
  CHECK(bound_states(PotentialSpec::square_well(pi * pi / 4 - 1e-3, 1), 0,
                     make_grid(PotentialSpec::square_well(pi * pi / 4 - 1e-3, 1)))
            .gammas.empty());
}

TEST_CASE("property: V >= 0 zero-energy solutions are monotone and convex") {
  const auto pot = PotentialSpec::exponential_tail(2, 1);
  const RadialGrid g = make_grid(pot);
  const auto phi = solve_regular(pot, 0.0, 0, g);
  const auto chi = solve_zero_bounded(pot, 0, g);
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(phi.value(i) > phi.value(i - 1));
    CHECK(phi.derivative(i) >= phi.derivative(i - 1) - 1e-12);
    CHECK(chi.value(i) > 0);
    CHECK(chi.derivative(i) <= 1e-12);
  }
}

TEST_CASE("property: rescaled storage agrees with unscaled values") {
  const auto pot = PotentialSpec::square_barrier(400, 1);
  const RadialGrid g = make_grid(pot);
  const auto s = solve_regular(pot, 0.0, 0, g);
  const std::size_t at = g.locate(1.0);
  // phi(1) = sinh(20)/20
  CHECK(std::log(s.value(at)) == doctest::Approx(std::log(std::sinh(20.0) / 20.0)).epsilon(1e-9));
}
