#include <immintrin.h>

#include <cmath>

#include "erange/kernels.hpp"

namespace erange::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void cross(const double* a, const double* ap, const double* b, const double* bp, double* out,
           std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(bp + i));
    _mm256_storeu_pd(out + i, _mm256_fmsub_pd(_mm256_loadu_pd(ap + i), _mm256_loadu_pd(b + i), t));
  }
  for (; i < n; ++i) out[i] = ap[i] * b[i] - a[i] * bp[i];
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

void quadratic_form(const double* a, const double* ap, double k2, double* out, std::size_t n) {
  const __m256d kk = _mm256_set1_pd(k2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(a + i);
    const __m256d xp = _mm256_loadu_pd(ap + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_mul_pd(kk, x), x, _mm256_mul_pd(xp, xp)));
  }
  for (; i < n; ++i) out[i] = ap[i] * ap[i] + k2 * a[i] * a[i];
}

void scaled_quotient(const double* w, const double* num, const double* den, double* out,
                     std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(num + i);
    const __m256d t = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), x), x);
    _mm256_storeu_pd(out + i, _mm256_div_pd(t, _mm256_loadu_pd(den + i)));
  }
  for (; i < n; ++i) out[i] = w[i] * num[i] * num[i] / den[i];
}

double max_abs_deviation(const double* a, double c, std::size_t n) {
  const __m256d cc = _mm256_set1_pd(c);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(a + i), cc)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::fmax(r, std::abs(a[i] - c));
  return r;
}

constexpr Table kAvx2{dot, hadamard, cross, sum_squares, quadratic_form, scaled_quotient,
                      max_abs_deviation};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace erange::kernels
