#include "gvar/kernels.hpp"

#include <cmath>

namespace gvar::kernels {
namespace {

double dot_scalar(std::size_t n, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_scalar(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
                 std::size_t ldb, double beta, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = c + j * ldc;
    if (beta == 0.0) {
      for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
    } else if (beta != 1.0) {
      for (std::size_t i = 0; i < m; ++i) cj[i] *= beta;
    }
    for (std::size_t l = 0; l < k; ++l) {
      const double blj = b[l + j * ldb];
      if (blj == 0.0) continue;
      axpy_scalar(m, blj, a + l * lda, cj);
    }
  }
}

void crossprod_scalar(std::size_t n, std::size_t ka, std::size_t kb, const double* a, std::size_t lda,
                      const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < kb; ++j)
    for (std::size_t i = 0; i < ka; ++i) c[i + j * ldc] = dot_scalar(n, a + i * lda, b + j * ldb);
}

double max_abs_scaled_scalar(std::size_t n, const double* x, const double* scale, std::size_t skip) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == skip) continue;
    const double v = std::fabs(x[i] * scale[i]);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", dot_scalar, axpy_scalar, gemm_scalar, crossprod_scalar,
                                 max_abs_scaled_scalar};
  return table;
}

}  // namespace gvar::kernels
