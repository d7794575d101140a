#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64 builds, an AVX2 version; the active table is chosen once at
// runtime from the CPU features and the GIBBS_DECOMP_SIMD environment
// variable ("scalar", "avx2" or "auto").
//
// sup_distance, max_value and axpy evaluate exactly the same floating point
// operations per output element in every variant, so their results are
// bit-identical across variants. dot reassociates the sum.

#include <cstddef>
#include <span>

namespace gibbsdecomp::kernels {

// Column-major table of separable functions: entry (symbol column c, row x)
// lives at data[c * stride + x]. Coordinate i owns columns
// [offsets[i], offsets[i+1]).
struct ColumnTable {
  const double* data = nullptr;
  std::size_t stride = 0;
  std::span<const std::size_t> offsets;
};

struct KernelTable {
  const char* name;

  // For rows x in [begin, end):
  //   h_i(s) = table(offsets[i] + s, x) - center[offsets[i] + s]
  //   out[x - begin] = max(sum_i max_s h_i(s), -sum_i min_s h_i(s))
  // i.e. the uniform norm of the separable difference row_x - center.
  void (*sup_distance)(const ColumnTable& table, const double* center,
                       std::size_t begin, std::size_t end, double* out);

  double (*dot)(const double* a, const double* b, std::size_t n);

  double (*max_value)(const double* a, std::size_t n);

  // y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2();
const KernelTable& active();

}  // namespace gibbsdecomp::kernels
