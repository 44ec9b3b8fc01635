#include <arm_neon.h>

#include "simd_decls.hpp"

namespace gvar::kernels::neon {
namespace {

inline double sabs(double x) { return x < 0.0 ? -x : x; }

double max_abs_range(const double* x, const double* scale, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) best = vmaxq_f64(best, vabsq_f64(vmulq_f64(vld1q_f64(x + i), vld1q_f64(scale + i))));
  double out = vmaxvq_f64(best);
  for (; i < n; ++i) {
    const double v = sabs(x[i] * scale[i]);
    if (v > out) out = v;
  }
  return out;
}

}  // namespace

bool cpu_supported() { return true; }  // Advanced SIMD is mandatory on aarch64

double dot(std::size_t n, const double* a, const double* b) {
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a + i), vld1q_f64(b + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
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
    for (std::size_t l = 0; l < k; ++l) axpy(m, b[l + j * ldb], a + l * lda, cj);
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

}  // namespace gvar::kernels::neon
