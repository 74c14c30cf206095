#include <cmath>

#include "erange/kernels.hpp"

namespace erange::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void cross(const double* a, const double* ap, const double* b, const double* bp, double* out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ap[i] * b[i] - a[i] * bp[i];
}

double sum_squares(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

void quadratic_form(const double* a, const double* ap, double k2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ap[i] * ap[i] + k2 * a[i] * a[i];
}

void scaled_quotient(const double* w, const double* num, const double* den, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * num[i] * num[i] / den[i];
}

double max_abs_deviation(const double* a, double c, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::abs(a[i] - c));
  return m;
}

constexpr Table kScalar{dot, hadamard, cross, sum_squares, quadratic_form, scaled_quotient,
                        max_abs_deviation};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace erange::kernels
