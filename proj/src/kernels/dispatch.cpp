#include <cstdlib>
#include <string_view>

#include "gibbsdecomp/kernels.hpp"
#include "kernels_impl.hpp"

namespace gibbsdecomp::kernels {

const KernelTable* avx2() {
#if defined(GIBBSDECOMP_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* env = std::getenv("GIBBS_DECOMP_SIMD");
    const std::string_view choice = env ? env : "auto";
    if (choice == "scalar") return scalar();
    if (const KernelTable* vec = avx2()) return *vec;
    return scalar();
  }();
  return table;
}

}  // namespace gibbsdecomp::kernels
