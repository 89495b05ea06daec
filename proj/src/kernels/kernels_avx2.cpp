// AVX2 backend. Each function mirrors the scalar reference exactly:
// reductions keep four independent lanes combined as (a0+a1)+(a2+a3),
// per-point loops perform the same operations in the same order, and
// remainders run the scalar tail code.

#include <immintrin.h>

#include <cstring>

#include "kernels_impl.hpp"

namespace puea::kernels::detail {

namespace {

// (l0+l1)+(l2+l3) over the four lanes of acc.
inline double lane_sum(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);   // [l0, l1]
  const __m128d hi = _mm256_extractf128_pd(acc, 1); // [l2, l3]
  const __m128d pair = _mm_hadd_pd(lo, hi);         // [l0+l1, l2+l3]
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double s = lane_sum(acc);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_diff_avx2(const double* x, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = lane_sum(acc);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = x[i] - center;
    s += d * d;
  }
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (std::size_t i = n4; i < n; ++i) y[i] += a * x[i];
}

void squared_dists_avx2(const FeatureMatrix& pts, const double* q,
                        double* out) {
  const std::size_t m = pts.rows();
  const std::size_t d = pts.cols();
  std::memset(out, 0, m * sizeof(double));
  const std::size_t m4 = m & ~std::size_t(3);
  for (std::size_t j = 0; j < d; ++j) {
    const double* c = pts.col(j);
    const __m256d qj = _mm256_set1_pd(q[j]);
    for (std::size_t i = 0; i < m4; i += 4) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(c + i), qj);
      const __m256d acc = _mm256_add_pd(_mm256_loadu_pd(out + i),
                                        _mm256_mul_pd(diff, diff));
      _mm256_storeu_pd(out + i, acc);
    }
    const double qs = q[j];
    for (std::size_t i = m4; i < m; ++i) {
      const double diff = c[i] - qs;
      out[i] += diff * diff;
    }
  }
}

void quadform_avx2(const FeatureMatrix& pts, const double* center,
                   const double* m, double* out) {
  const std::size_t rows = pts.rows();
  const std::size_t d = pts.cols();
  std::memset(out, 0, rows * sizeof(double));
  const std::size_t r4 = rows & ~std::size_t(3);
  for (std::size_t j = 0; j < d; ++j) {
    const double* cj = pts.col(j);
    const __m256d muj = _mm256_set1_pd(center[j]);
    for (std::size_t l = 0; l < d; ++l) {
      const double* cl = pts.col(l);
      const __m256d mul = _mm256_set1_pd(center[l]);
      const __m256d coef = _mm256_set1_pd(m[j * d + l]);
      for (std::size_t i = 0; i < r4; i += 4) {
        const __m256d dj = _mm256_sub_pd(_mm256_loadu_pd(cj + i), muj);
        const __m256d dl = _mm256_sub_pd(_mm256_loadu_pd(cl + i), mul);
        const __m256d term = _mm256_mul_pd(_mm256_mul_pd(dj, coef), dl);
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_loadu_pd(out + i), term));
      }
      const double mujs = center[j];
      const double muls = center[l];
      const double coefs = m[j * d + l];
      for (std::size_t i = r4; i < rows; ++i) {
        out[i] += ((cj[i] - mujs) * coefs) * (cl[i] - muls);
      }
    }
  }
}

}  // namespace puea::kernels::detail
