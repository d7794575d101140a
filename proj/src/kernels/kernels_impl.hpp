#pragma once

#include "gibbsdecomp/kernels.hpp"

namespace gibbsdecomp::kernels::detail {

#if defined(GIBBSDECOMP_BUILD_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace gibbsdecomp::kernels::detail
