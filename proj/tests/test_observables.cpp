#include <cmath>
#include <numbers>

#include "doctest.h"
#include "erange/errors.hpp"
#include "erange/observables.hpp"

using namespace erange;
using std::numbers::pi;

namespace {

struct PhaseOracle {
  int ell;
  double k;
  double delta;
};

// closed forms for SquareBarrier{4,1}, frozen from tests/oracles/closed_forms.txt
const PhaseOracle kBarrierPhases[] = {
    {0, 0.01, -0.005179848009099790864651917}, {0, 0.1, -0.05178452284898045493404635},
    {0, 1, -0.5030847378778251283389689},      {0, 2, -0.8928512822059094969829345},
    {0, 10, -0.1950598253266209619732604},     {1, 0.1, -0.00006452281486621079606405055},
    {1, 1, -0.0523514166039333893904451},      {1, 3, -0.5069946229494691702107584},
    {2, 0.5, -0.00006541736318121291295619182}, {2, 2, -0.040884955032637383168627},
    {2, 10, -0.1851766500987760790241937},
};

constexpr double kBarrierA0 = 0.517986209962091558;
constexpr double kBarrierB = 0.0140904441329988152;
constexpr double kBarrierR0 = 0.240292950919966209;
constexpr double kWellA0 = 1.56999897661972514668;
constexpr double kWellB = 0.381179981840085167;
constexpr double kWellGamma = 0.9651042013262973372;

}  // namespace

TEST_CASE("barrier phase shifts match closed forms by both methods") {
  const auto pot = PotentialSpec::square_barrier(4, 1);
  for (const auto& o : kBarrierPhases) {
    CAPTURE(o.ell);
    CAPTURE(o.k);
    const double tol = 1e-9 * std::max(1e-3, std::abs(o.delta));
    CHECK(std::abs(phase_shift_integral(pot, o.k, o.ell) - o.delta) < std::max(tol, 1e-12));
    CHECK(std::abs(phase_shift_matching(pot, o.k, o.ell) - o.delta) < std::max(tol, 1e-12));
  }
}

TEST_CASE("free potential has zero phase") {
  const auto free = PotentialSpec::free();
  for (double k : {0.01, 1.0, 10.0}) {
    CHECK(std::abs(phase_shift_integral(free, k, 0)) < 1e-15);
    CHECK(std::abs(phase_shift_matching(free, k, 1)) < 1e-9);
  }
  CHECK(scattering_length(free).a.value == 0.0);
}

TEST_CASE("integral formula refuses attractive potentials") {
  CHECK_THROWS_AS(phase_shift_integral(PotentialSpec::square_well(5, 1), 1.0, 0), PreconditionError);
  CHECK_THROWS_AS(phase_shift_integral(PotentialSpec::square_barrier(4, 1), 0.0, 0), DomainError);
}

TEST_CASE("property: V >= 0 gives delta <= 0 and the two formulas agree") {
  const std::vector<PotentialSpec> pots{PotentialSpec::square_barrier(4, 1), PotentialSpec::power_tail(1, 1, 6),
                                        PotentialSpec::exponential_tail(2, 1), PotentialSpec::power_tail(3, 0.5, 4)};
  for (const auto& pot : pots)
    for (int l = 0; l <= 2; ++l)
      for (double k = 0.01; k < 12; k *= 1.7) {
        const double a = phase_shift_integral(pot, k, l), b = phase_shift_matching(pot, k, l);
        CHECK(a <= 0.0);
        CHECK(std::abs(a - b) < 1e-7);
      }
}

TEST_CASE("hard-sphere limit") {
  const auto pot = PotentialSpec::square_barrier(1e8, 1);
  CHECK(phase_shift_integral(pot, 0.1, 0) == doctest::Approx(-0.1).epsilon(1e-3));
  const auto d = direct_effective_range(pot, 0);
  CHECK(d.a.value == doctest::Approx(0.9999).epsilon(1e-6));
  CHECK(d.r_eff.value == doctest::Approx(2.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("barrier scattering length, b and effective range") {
  const auto pot = PotentialSpec::square_barrier(4, 1);
  const auto sl = scattering_length(pot);
  CHECK(sl.a.value == doctest::Approx(kBarrierA0).epsilon(1e-10));
  CHECK(sl.limit_form == doctest::Approx(kBarrierA0).epsilon(1e-10));
  CHECK_FALSE(sl.consistency_warning);
  const auto b = b_coefficient(pot);
  CHECK(b.b.value == doctest::Approx(kBarrierB).epsilon(1e-8));
  CHECK(b.product_form == doctest::Approx(b.variable_phase_form).epsilon(1e-8));
  CHECK(direct_effective_range(pot, 0).r_eff.value == doctest::Approx(kBarrierR0).epsilon(1e-8));
  CHECK(scattering_length(pot, 1).a.value == doctest::Approx(0.064675972969559285).epsilon(1e-9));
  CHECK(scattering_length(pot, 2).a.value == doctest::Approx(0.0021607416551828735).epsilon(1e-8));
}

TEST_CASE("effective_range formula") {
  CHECK(effective_range(1, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(effective_range(1, 1) == doctest::Approx(-4.0 / 3.0));
  CHECK(effective_range(2, 1, 1) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(effective_range(0, 1), DomainError);
}

TEST_CASE("divergent markers follow the tail") {
  const auto sl = scattering_length(PotentialSpec::power_tail(1, 1, 2.5));
  CHECK_FALSE(sl.a.finite);
  CHECK_FALSE(sl.a.undefined);
  REQUIRE(sl.a.evidence.has_value());
  CHECK(sl.a.evidence->growth_exponent == doctest::Approx(0.5).epsilon(0.2));
  const auto b = b_coefficient(PotentialSpec::power_tail(1, 1, 4));
  CHECK_FALSE(b.b.finite);
  const auto d = direct_effective_range(PotentialSpec::power_tail(1, 1, 4), 0);
  CHECK(d.a.finite);
  CHECK_FALSE(d.r_eff.finite);
}

TEST_CASE("low-k fit reproduces the direct integrals") {
  const auto pot = PotentialSpec::square_barrier(4, 1);
  const auto fit = low_k_expansion(pot, 0, default_low_k_grid(pot));
  CHECK(fit.a.value == doctest::Approx(kBarrierA0).epsilon(1e-4));
  CHECK(fit.r_eff.value == doctest::Approx(kBarrierR0).epsilon(1e-3));
  const auto tail = PotentialSpec::power_tail(1, 1, 6);
  const auto f6 = low_k_expansion(tail, 0, default_low_k_grid(tail));
  const auto d6 = direct_effective_range(tail, 0);
  CHECK(std::abs(f6.r_eff.value - d6.r_eff.value) < 1e-3 * std::abs(d6.r_eff.value));
  const auto well = PotentialSpec::square_well(5, 1);
  const auto fw = low_k_expansion(well, 0, default_low_k_grid(well));
  CHECK(fw.a.value == doctest::Approx(kWellA0).epsilon(1e-6));
  CHECK(fw.fit->relative_residual < 1e-6);
}

TEST_CASE("identity residual is small on a resolving grid") {
  for (const auto& pot : {PotentialSpec::square_barrier(4, 1), PotentialSpec::power_tail(1, 1, 6)})
    for (double k : {0.1, 1.0}) CHECK(identity_residual(pot, k, 0, phase_grid(pot, k)) < 1e-8);
}

TEST_CASE("Levinson counts") {
  const auto barrier = levinson(PotentialSpec::square_barrier(4, 1), 0);
  CHECK(barrier.n == 0);
  CHECK(std::abs(barrier.delta_at_kmin) < 0.01);
  const auto w5 = levinson(PotentialSpec::square_well(5, 1), 0);
  CHECK(w5.n == 1);
  CHECK(w5.node_count == 1);
  CHECK(std::abs(w5.delta_at_kmin - pi) < 0.05);
  const auto w30 = levinson(PotentialSpec::square_well(30, 1), 0);
  CHECK(w30.n == 2);
  CHECK(std::abs(w30.delta_at_kmin - 2 * pi) < 0.05);
}

TEST_CASE("subtracted phase and barred coefficients") {
  PhaseShiftCurve c;
  c.k_values = {1.0, 1000.0};
  c.delta = {0.3, 0.01};
  const auto same = subtracted_phase(c, {});
  CHECK(same.delta == c.delta);
  const auto s = subtracted_phase(c, {1.0});
  CHECK(s.delta[0] == doctest::Approx(0.3 - pi / 2));
  CHECK(s.delta[1] - c.delta[1] == doctest::Approx(-2.0 / 1000.0 + 2.0 / 3e9).epsilon(1e-12));
  auto bc = barred_coefficients(3, 1, {1});
  CHECK(bc.a_bar == doctest::Approx(1.0));
  CHECK(bc.b_bar == doctest::Approx(1.0 - 2.0 / 3.0));
  CHECK(barred_coefficients(3, 1, {2}).a_bar == doctest::Approx(2.0));
  bc = barred_coefficients(3, 1, {});
  CHECK(bc.a_bar == 3.0);
  CHECK(bc.b_bar == 1.0);
}

TEST_CASE("subtracted-phase fit closes on a0 - 2/gamma") {
  const auto pot = PotentialSpec::square_well(5, 1);
  const auto spectrum = bound_states(pot, 0, make_grid(pot));
  REQUIRE(spectrum.gammas.size() == 1);
  CHECK(spectrum.gammas[0] == doctest::Approx(kWellGamma).epsilon(1e-10));
  const auto curve = phase_shift_curve(pot, 0, default_low_k_grid(pot), PhaseMethod::asymptotic_matching);
  const auto bar = low_k_expansion(subtracted_phase(curve, spectrum.gammas), 0, std::nullopt);
  CHECK(bar.a.value == doctest::Approx(kWellA0 - 2 / kWellGamma).epsilon(1e-6));
  // the k^3 coefficient shifts by (2/3) / gamma^3, the Arctg series coefficient
  const double g3 = kWellGamma * kWellGamma * kWellGamma;
  CHECK(bar.b.value == doctest::Approx(kWellB - 2.0 / (3.0 * g3)).epsilon(1e-3));
}
