#include <arm_neon.h>

#include <cmath>

#include "erange/kernels.hpp"

namespace erange::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void cross(const double* a, const double* ap, const double* b, const double* bp, double* out,
           std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vmulq_f64(vld1q_f64(ap + i), vld1q_f64(b + i));
    vst1q_f64(out + i, vfmsq_f64(t, vld1q_f64(a + i), vld1q_f64(bp + i)));
  }
  for (; i < n; ++i) out[i] = ap[i] * b[i] - a[i] * bp[i];
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

void quadratic_form(const double* a, const double* ap, double k2, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(a + i);
    const float64x2_t xp = vld1q_f64(ap + i);
    vst1q_f64(out + i, vfmaq_f64(vmulq_f64(xp, xp), vmulq_n_f64(x, k2), x));
  }
  for (; i < n; ++i) out[i] = ap[i] * ap[i] + k2 * a[i] * a[i];
}

void scaled_quotient(const double* w, const double* num, const double* den, double* out,
                     std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(num + i);
    vst1q_f64(out + i, vdivq_f64(vmulq_f64(vmulq_f64(vld1q_f64(w + i), x), x), vld1q_f64(den + i)));
  }
  for (; i < n; ++i) out[i] = w[i] * num[i] * num[i] / den[i];
}

double max_abs_deviation(const double* a, double c, std::size_t n) {
  const float64x2_t cc = vdupq_n_f64(c);
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabdq_f64(vld1q_f64(a + i), cc));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::fmax(r, std::abs(a[i] - c));
  return r;
}

constexpr Table kNeon{dot, hadamard, cross, sum_squares, quadratic_form, scaled_quotient,
                      max_abs_deviation};

}  // namespace

const Table* neon_table() { return &kNeon; }

}  // namespace erange::kernels
