#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "erange/kernels.hpp"

using namespace erange;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol * (1.0 + std::abs(a[i])));
}

void equivalent(const kernels::Table& s, const kernels::Table& t) {
  std::mt19937_64 rng(42);
  // lengths straddle every vector width and remainder
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 100u, 1001u}) {
    const auto a = random_vector(rng, n, -2, 2), ap = random_vector(rng, n, -2, 2);
    const auto b = random_vector(rng, n, -2, 2), bp = random_vector(rng, n, -2, 2);
    const auto den = random_vector(rng, n, 0.5, 3);
    CHECK(std::abs(s.dot(a.data(), b.data(), n) - t.dot(a.data(), b.data(), n)) <= 1e-13 * (1.0 + n));
    CHECK(std::abs(s.sum_squares(a.data(), n) - t.sum_squares(a.data(), n)) <= 1e-13 * (1.0 + n));
    CHECK(s.max_abs_deviation(a.data(), 0.3, n) == t.max_abs_deviation(a.data(), 0.3, n));
    std::vector<double> o1(n), o2(n);
    s.hadamard(a.data(), b.data(), o1.data(), n);
    t.hadamard(a.data(), b.data(), o2.data(), n);
    check_close(o1, o2, 0.0);
    s.cross(a.data(), ap.data(), b.data(), bp.data(), o1.data(), n);
    t.cross(a.data(), ap.data(), b.data(), bp.data(), o2.data(), n);
    check_close(o1, o2, 1e-15);
    s.quadratic_form(a.data(), ap.data(), 2.5, o1.data(), n);
    t.quadratic_form(a.data(), ap.data(), 2.5, o2.data(), n);
    check_close(o1, o2, 1e-15);
    s.scaled_quotient(den.data(), a.data(), den.data(), o1.data(), n);
    t.scaled_quotient(den.data(), a.data(), den.data(), o2.data(), n);
    check_close(o1, o2, 1e-15);
  }
}

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
  const auto& s = kernels::scalar_table();
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(s.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(s.sum_squares(a.data(), 3) == 14.0);
  CHECK(s.max_abs_deviation(b.data(), 1.0, 3) == 6.0);
  std::vector<double> o(3);
  s.quadratic_form(a.data(), b.data(), 2.0, o.data(), 3);
  CHECK(o[1] == 25.0 + 8.0);
}

TEST_CASE("active kernels equal the scalar reference") {
  INFO("active isa: " << kernels::isa_name(kernels::active_isa()));
  equivalent(kernels::scalar_table(), kernels::active());
}

TEST_CASE("every compiled SIMD table equals the scalar reference") {
#if defined(__x86_64__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    if (const auto* t = kernels::avx2_table()) equivalent(kernels::scalar_table(), *t);
#endif
  if (const auto* t = kernels::neon_table()) equivalent(kernels::scalar_table(), *t);
}
