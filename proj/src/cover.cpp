#include "gibbsdecomp/cover.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/parallel.hpp"

namespace gibbsdecomp {

namespace {

constexpr std::size_t kChunk = 4096;

// out[x] = || row(x) - row(center) || for all x, chunked across workers.
void distances_to(const GradientMap& grad, std::size_t center, std::vector<double>& out) {
  const auto c = grad.row_values(center);
  out.resize(grad.rows());
  const std::size_t chunks = (grad.rows() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t q) {
    const std::size_t begin = q * kChunk;
    const std::size_t end = std::min(grad.rows(), begin + kChunk);
    grad.distances(c, begin, end, std::span<double>(out.data() + begin, end - begin));
  });
}

}  // namespace

PartitionOfSpace GradientCover::partition() const {
  return PartitionOfSpace::from_labels(assignment);
}

GradientCover greedy_cover(const GradientMap& grad, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("greedy_cover: delta must be positive and finite");
  }
  const std::size_t N = grad.rows();
  GradientCover cover;
  cover.delta = delta;
  cover.n = grad.space().dims();
  const double radius = 0.5 * delta * static_cast<double>(cover.n);

  std::vector<double> nearest(N), dist;
  cover.assignment.assign(N, 0);
  cover.centers.push_back(0);
  distances_to(grad, 0, dist);
  nearest = dist;
  while (true) {
    std::size_t far = 0;
    for (std::size_t x = 1; x < N; ++x)
      if (nearest[x] > nearest[far]) far = x;
    if (nearest[far] <= radius) break;
    const std::size_t id = cover.centers.size();
    cover.centers.push_back(far);
    distances_to(grad, far, dist);
    for (std::size_t x = 0; x < N; ++x) {
      if (dist[x] < nearest[x]) {
        nearest[x] = dist[x];
        cover.assignment[x] = id;
      }
    }
  }
  cover.radius_check = N ? *std::max_element(nearest.begin(), nearest.end()) : 0.0;
  return cover;
}

GradientCover greedy_cover(const Potential& f, double delta) {
  return greedy_cover(GradientMap(f), delta);
}

double covering_exponent(const GradientCover& cover) {
  if (cover.n == 0 || cover.centers.empty()) return 0.0;
  return std::log(static_cast<double>(cover.centers.size())) / static_cast<double>(cover.n);
}

HypothesisCheck verify_partition_hypothesis(const GradientMap& grad,
                                            const PartitionOfSpace& P,
                                            std::size_t pair_budget) {
  if (P.state_count() != grad.rows()) {
    throw ConfigError("verify_partition_hypothesis: partition does not match the space");
  }
  HypothesisCheck h;
  h.part_diameters.assign(P.size(), 0.0);
  std::vector<char> exact(P.size(), 1);
  parallel_for(P.size(), [&](std::size_t p) {
    const auto part = P.part(p);
    // Distinct gradients only; many models repeat them heavily.
    std::vector<std::vector<double>> distinct;
    distinct.reserve(part.size());
    for (std::size_t x : part) distinct.push_back(grad.row_values(x));
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t s = distinct.size();
    double diam = 0.0;
    std::vector<double> rows(s * grad.width());
    for (std::size_t a = 0; a < s; ++a) {
      std::copy(distinct[a].begin(), distinct[a].end(), rows.begin() + a * grad.width());
    }
    // Separable differences: closed-form sup norm per pair.
    auto pair_dist = [&](std::size_t a, std::size_t b) {
      const ProductSpace& sp = grad.space();
      double pos = 0.0, neg = 0.0;
      for (std::size_t i = 0; i < sp.dims(); ++i) {
        const std::size_t o = sp.offset(i);
        double hi = rows[a * grad.width() + o] - rows[b * grad.width() + o];
        double lo = hi;
        for (std::size_t t = 1; t < sp.radix(i); ++t) {
          const double d = rows[a * grad.width() + o + t] - rows[b * grad.width() + o + t];
          hi = std::max(hi, d);
          lo = std::min(lo, d);
        }
        pos += hi;
        neg += lo;
      }
      return std::max(pos, -neg);
    };
    const std::size_t pairs = s * (s - 1) / 2;
    if (s > 1 && pairs <= pair_budget) {
      for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = a + 1; b < s; ++b) diam = std::max(diam, pair_dist(a, b));
    } else if (s > 1) {
      for (std::size_t b = 1; b < s; ++b) diam = std::max(diam, pair_dist(b, 0));
      diam *= 2.0;
      exact[p] = 0;
    }
    h.part_diameters[p] = diam;
  });
  for (std::size_t p = 0; p < P.size(); ++p) {
    h.diameter = std::max(h.diameter, h.part_diameters[p]);
    if (!exact[p]) h.exact = false;
  }
  const std::size_t n = grad.space().dims();
  h.delta_eff = n ? h.diameter / static_cast<double>(n) : 0.0;
  return h;
}

HypothesisCheck verify_partition_hypothesis(const Potential& f, const PartitionOfSpace& P,
                                            std::size_t pair_budget) {
  return verify_partition_hypothesis(GradientMap(f), P, pair_budget);
}

HypothesisCheck gradient_diameter(const GradientMap& grad, std::size_t pair_budget) {
  return verify_partition_hypothesis(grad, PartitionOfSpace::trivial(grad.rows()),
                                     pair_budget);
}

}  // namespace gibbsdecomp
