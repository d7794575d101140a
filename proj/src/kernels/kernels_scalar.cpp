#include <algorithm>

#include "gibbsdecomp/kernels.hpp"
#include "kernels_impl.hpp"

namespace gibbsdecomp::kernels {

namespace {

void sup_distance_scalar(const ColumnTable& table, const double* center,
                         std::size_t begin, std::size_t end, double* out) {
  const std::size_t n = table.offsets.size() - 1;
  for (std::size_t x = begin; x < end; ++x) {
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t first = table.offsets[i];
      const std::size_t last = table.offsets[i + 1];
      double hi = table.data[first * table.stride + x] - center[first];
      double lo = hi;
      for (std::size_t c = first + 1; c < last; ++c) {
        const double d = table.data[c * table.stride + x] - center[c];
        hi = std::max(hi, d);
        lo = std::min(lo, d);
      }
      pos += hi;
      neg += lo;
    }
    out[x - begin] = std::max(pos, -neg);
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

double max_scalar(const double* a, std::size_t n) {
  double m = a[0];
  for (std::size_t k = 1; k < n; ++k) m = std::max(m, a[k]);
  return m;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

constexpr KernelTable kScalar{"scalar", sup_distance_scalar, dot_scalar,
                              max_scalar, axpy_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace gibbsdecomp::kernels
