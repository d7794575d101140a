#include <immintrin.h>

#include <algorithm>

#include "kernels_impl.hpp"

namespace gibbsdecomp::kernels {

namespace {

void sup_distance_avx2(const ColumnTable& table, const double* center,
                       std::size_t begin, std::size_t end, double* out) {
  const std::size_t n = table.offsets.size() - 1;
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t x = begin;
  for (; x + 4 <= end; x += 4) {
    __m256d pos = _mm256_setzero_pd();
    __m256d neg = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t first = table.offsets[i];
      const std::size_t last = table.offsets[i + 1];
      __m256d hi = _mm256_sub_pd(_mm256_loadu_pd(table.data + first * table.stride + x),
                                 _mm256_set1_pd(center[first]));
      __m256d lo = hi;
      for (std::size_t c = first + 1; c < last; ++c) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(table.data + c * table.stride + x),
                                        _mm256_set1_pd(center[c]));
        // Operand order mirrors std::max/std::min tie handling.
        hi = _mm256_max_pd(d, hi);
        lo = _mm256_min_pd(d, lo);
      }
      pos = _mm256_add_pd(pos, hi);
      neg = _mm256_add_pd(neg, lo);
    }
    _mm256_storeu_pd(out + (x - begin), _mm256_max_pd(_mm256_xor_pd(neg, sign), pos));
  }
  // Tail: identical operation sequence, one lane at a time.
  for (; x < end; ++x) {
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

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + k + 4),
                                             _mm256_loadu_pd(b + k + 4)));
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

double max_avx2(const double* a, std::size_t n) {
  if (n < 4) {
    double m = a[0];
    for (std::size_t k = 1; k < n; ++k) m = std::max(m, a[k]);
    return m;
  }
  __m256d m = _mm256_loadu_pd(a);
  std::size_t k = 4;
  for (; k + 4 <= n; k += 4) m = _mm256_max_pd(_mm256_loadu_pd(a + k), m);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double best = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; k < n; ++k) best = std::max(best, a[k]);
  return best;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), prod));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

constexpr KernelTable kAvx2{"avx2", sup_distance_avx2, dot_avx2, max_avx2, axpy_avx2};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return kAvx2; }
}  // namespace detail

}  // namespace gibbsdecomp::kernels
