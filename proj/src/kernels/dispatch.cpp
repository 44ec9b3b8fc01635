#include <cstdlib>
#include <string_view>

#include "gvar/kernels.hpp"
#include "simd_decls.hpp"

namespace gvar::kernels {

const KernelTable* simd() {
#if defined(GVAR_WITH_AVX2)
  static const KernelTable table{"avx2", avx2::dot, avx2::axpy, avx2::gemm, avx2::crossprod, avx2::max_abs_scaled};
  static const bool ok = avx2::cpu_supported();
  return ok ? &table : nullptr;
#elif defined(GVAR_WITH_NEON)
  static const KernelTable table{"neon", neon::dot, neon::axpy, neon::gemm, neon::crossprod, neon::max_abs_scaled};
  return neon::cpu_supported() ? &table : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("GVAR_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar();
  if (const KernelTable* t = simd()) return *t;
  return scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace gvar::kernels
