#pragma once

#include <cstddef>
#include <string_view>

// Elementwise and reduction kernels over contiguous double arrays.
// Scalar reference plus AVX2/NEON variants picked once at startup.

namespace erange::kernels {

enum class Isa { scalar, avx2, neon };

struct Table {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
  // out = ap * b - a * bp
  void (*cross)(const double* a, const double* ap, const double* b, const double* bp,
                double* out, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // out = ap^2 + k2 * a^2
  void (*quadratic_form)(const double* a, const double* ap, double k2, double* out, std::size_t n);
  // out = w * num^2 / den
  void (*scaled_quotient)(const double* w, const double* num, const double* den, double* out,
                          std::size_t n);
  // max |a - c|
  double (*max_abs_deviation)(const double* a, double c, std::size_t n);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in
const Table* neon_table();

/// Best available table; ERANGE_SIMD=scalar forces the reference path.
const Table& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  active().hadamard(a, b, out, n);
}
inline void cross(const double* a, const double* ap, const double* b, const double* bp, double* out,
                  std::size_t n) {
  active().cross(a, ap, b, bp, out, n);
}
inline double sum_squares(const double* a, std::size_t n) { return active().sum_squares(a, n); }
inline void quadratic_form(const double* a, const double* ap, double k2, double* out, std::size_t n) {
  active().quadratic_form(a, ap, k2, out, n);
}
inline void scaled_quotient(const double* w, const double* num, const double* den, double* out,
                            std::size_t n) {
  active().scaled_quotient(w, num, den, out, n);
}
inline double max_abs_deviation(const double* a, double c, std::size_t n) {
  return active().max_abs_deviation(a, c, n);
}

}  // namespace erange::kernels
