#pragma once

// Dense inner loops used by estimation, identification and impulse responses.
//
// Every kernel has a portable scalar reference implementation plus optional
// SIMD variants (AVX2+FMA on x86-64, NEON on aarch64). The variant is chosen
// once per process from CPU features; GVAR_KERNELS=scalar|avx2|neon forces a
// particular table. All matrices are column-major with an explicit leading
// dimension, which is what Eigen's default storage hands us.

#include <cstddef>
#include <string_view>

namespace gvar::kernels {

using DotFn = double (*)(std::size_t n, const double* a, const double* b);
using AxpyFn = void (*)(std::size_t n, double alpha, const double* x, double* y);
// C(m x n) = A(m x k) * B(k x n) + beta * C
using GemmFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                        const double* b, std::size_t ldb, double beta, double* c, std::size_t ldc);
// C(ka x kb) = A(n x ka)^T * B(n x kb)
using CrossprodFn = void (*)(std::size_t n, std::size_t ka, std::size_t kb, const double* a, std::size_t lda,
                             const double* b, std::size_t ldb, double* c, std::size_t ldc);
// max_{i != skip} |x[i] * scale[i]|; returns 0 for an empty range
using MaxAbsScaledFn = double (*)(std::size_t n, const double* x, const double* scale, std::size_t skip);

struct KernelTable {
  std::string_view name;
  DotFn dot;
  AxpyFn axpy;
  GemmFn gemm;
  CrossprodFn crossprod;
  MaxAbsScaledFn max_abs_scaled;
};

const KernelTable& scalar();

/// SIMD table if compiled in and supported by this CPU, nullptr otherwise.
const KernelTable* simd();

/// Table used by the library. Selected on first use and fixed afterwards.
const KernelTable& active();

}  // namespace gvar::kernels
