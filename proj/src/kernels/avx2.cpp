// Compiled with -mavx2 -mfma. Keep includes to intrinsics only.
#include <immintrin.h>

#include "simd_decls.hpp"

namespace gvar::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double sabs(double x) { return x < 0.0 ? -x : x; }

double max_abs_range(const double* x, const double* scale, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(scale + i));
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign, v));
  }
  double out = hmax(best);
  for (; i < n; ++i) {
    const double v = sabs(x[i] * scale[i]);
    if (v > out) out = v;
  }
  return out;
}

}  // namespace

bool cpu_supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double dot(std::size_t n, const double* a, const double* b) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double beta, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = c + j * ldc;
    if (beta == 0.0) {
      for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
    } else if (beta != 1.0) {
      for (std::size_t i = 0; i < m; ++i) cj[i] *= beta;
    }
    const double* bj = b + j * ldb;
    std::size_t l = 0;
    // four columns of A per pass so each C load/store is amortised
    for (; l + 4 <= k; l += 4) {
      const double* a0 = a + l * lda;
      const double* a1 = a0 + lda;
      const double* a2 = a1 + lda;
      const double* a3 = a2 + lda;
      const __m256d b0 = _mm256_set1_pd(bj[l]);
      const __m256d b1 = _mm256_set1_pd(bj[l + 1]);
      const __m256d b2 = _mm256_set1_pd(bj[l + 2]);
      const __m256d b3 = _mm256_set1_pd(bj[l + 3]);
      std::size_t i = 0;
      for (; i + 4 <= m; i += 4) {
        __m256d acc = _mm256_loadu_pd(cj + i);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + i), b0, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + i), b1, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + i), b2, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + i), b3, acc);
        _mm256_storeu_pd(cj + i, acc);
      }
      for (; i < m; ++i) cj[i] += a0[i] * bj[l] + a1[i] * bj[l + 1] + a2[i] * bj[l + 2] + a3[i] * bj[l + 3];
    }
    for (; l < k; ++l) axpy(m, bj[l], a + l * lda, cj);
  }
}

void crossprod(std::size_t n, std::size_t ka, std::size_t kb, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < kb; ++j)
    for (std::size_t i = 0; i < ka; ++i) c[i + j * ldc] = dot(n, a + i * lda, b + j * ldb);
}

double max_abs_scaled(std::size_t n, const double* x, const double* scale, std::size_t skip) {
  if (skip >= n) return max_abs_range(x, scale, n);
  const double left = max_abs_range(x, scale, skip);
  const double right = max_abs_range(x + skip + 1, scale + skip + 1, n - skip - 1);
  return left > right ? left : right;
}

}  // namespace gvar::kernels::avx2
