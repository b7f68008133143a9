#include <cstdlib>
#include <string_view>

#include "tilemeasure/kernels.hpp"

namespace tilemeasure::kernels {

#if defined(TILEMEASURE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

const KernelTable* avx2_kernels() {
#if defined(TILEMEASURE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable* table = [] {
    if (const char* forced = std::getenv("TILEMEASURE_KERNELS");
        forced != nullptr && std::string_view(forced) == "scalar") {
      return &scalar_kernels();
    }
    if (const KernelTable* avx2 = avx2_kernels()) return avx2;
    return &scalar_kernels();
  }();
  return *table;
}

}  // namespace tilemeasure::kernels
