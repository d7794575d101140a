#pragma once

// Seeded random instances for the property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/models.hpp"
#include "gibbsdecomp/potential.hpp"
#include "gibbsdecomp/space.hpp"

namespace gen {

using namespace gibbsdecomp;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return lo + (hi - lo) * uniform01(rng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin(double p = 0.5) { return uniform01(rng_) < p; }

  // Up to max_n coordinates with alphabets of size 1..max_k, random
  // reference points and positive lambda; metrics are either discrete or
  // |a - b| / (k - 1) on a shuffled line, so each is a genuine metric.
  SpacePtr space(std::size_t max_n, std::size_t max_k, std::size_t max_states = 4096) {
    for (;;) {
      SpaceSpec spec;
      const std::size_t n = 1 + index(max_n);
      std::size_t states = 1;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = 1 + index(max_k);
        states *= k;
        std::vector<std::string> syms;
        for (std::size_t s = 0; s < k; ++s) syms.push_back(std::to_string(s));
        spec.alphabets.push_back(syms);
        std::vector<double> lam(k);
        for (double& v : lam) v = real(0.05, 1.0);
        double t = 0.0;
        for (double v : lam) t += v;
        for (double& v : lam) v /= t;
        spec.reference_measures.push_back(lam);
        spec.reference_points.push_back(index(k));
        std::vector<std::vector<double>> metric(k, std::vector<double>(k, 0.0));
        const bool line = k > 2 && coin();
        std::vector<double> pos(k);
        for (std::size_t s = 0; s < k; ++s) pos[s] = k > 1 ? double(s) / double(k - 1) : 0.0;
        std::shuffle(pos.begin(), pos.end(), rng_);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b)
            metric[a][b] = a == b ? 0.0 : line ? std::abs(pos[a] - pos[b]) : 1.0;
        spec.metrics.push_back(metric);
      }
      if (states > max_states) continue;
      return ProductSpace::make(std::move(spec));
    }
  }

  SpacePtr binary(std::size_t n) { return ProductSpace::uniform(std::vector<std::size_t>(n, 2)); }

  Potential potential(SpacePtr s, double amplitude = 1.0) {
    std::vector<double> v(s->state_count());
    for (double& x : v) x = real(-amplitude, amplitude);
    return Potential(std::move(s), std::move(v));
  }

  SeparableFunction separable(SpacePtr s, double amplitude = 1.0) {
    std::vector<double> flat(s->symbol_total());
    for (double& x : flat) x = real(-amplitude, amplitude);
    return SeparableFunction(std::move(s), std::move(flat));
  }

  // Random weights; with probability `holes` an entry is zero (at least
  // one entry stays positive).
  Distribution distribution(SpacePtr s, double holes = 0.0) {
    std::vector<double> w(s->state_count());
    for (double& x : w) x = coin(holes) ? 0.0 : real(0.01, 1.0);
    w[index(w.size())] = real(0.01, 1.0);
    return Distribution::normalized(std::move(s), std::move(w));
  }

  PartitionOfSpace partition(std::size_t states, std::size_t max_parts) {
    std::vector<std::size_t> labels(states);
    const std::size_t parts = 1 + index(max_parts);
    for (auto& l : labels) l = index(parts);
    return PartitionOfSpace::from_labels(labels);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
