#pragma once

// Raw entry points of the SIMD translation units. Only plain types cross this
// boundary so that no inline library code gets compiled with ISA flags the
// host may not support.

#include <cstddef>

namespace gvar::kernels::avx2 {
bool cpu_supported();
double dot(std::size_t n, const double* a, const double* b);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double beta, double* c, std::size_t ldc);
void crossprod(std::size_t n, std::size_t ka, std::size_t kb, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc);
double max_abs_scaled(std::size_t n, const double* x, const double* scale, std::size_t skip);
}  // namespace gvar::kernels::avx2

namespace gvar::kernels::neon {
bool cpu_supported();
double dot(std::size_t n, const double* a, const double* b);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double beta, double* c, std::size_t ldc);
void crossprod(std::size_t n, std::size_t ka, std::size_t kb, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc);
double max_abs_scaled(std::size_t n, const double* x, const double* scale, std::size_t skip);
}  // namespace gvar::kernels::neon
