#include "gibbsdecomp/models.hpp"

#include <cmath>

#include "gibbsdecomp/errors.hpp"

namespace gibbsdecomp {

Potential make_curie_weiss(std::size_t n, double beta, double h, double plus_weight,
                           std::size_t state_budget) {
  if (n == 0) throw ConfigError("curie-weiss: n must be at least 1");
  if (!std::isfinite(beta) || !std::isfinite(h)) {
    throw ConfigError("curie-weiss: beta and h must be finite");
  }
  SpacePtr space = ProductSpace::spins(n, plus_weight, state_budget);
  std::vector<double> values(space->state_count());
  const double scale = beta / (2.0 * static_cast<double>(n));
  for (std::size_t x = 0; x < values.size(); ++x) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += space->symbol(x, i) == 1 ? 1.0 : -1.0;
    values[x] = scale * m * m + h * m;
  }
  return Potential(std::move(space), std::move(values));
}

Potential make_random_potential(SpacePtr space, std::uint64_t seed, double amplitude) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ConfigError("random potential: amplitude must be finite and nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> values(space->state_count());
  for (double& v : values) v = amplitude * (2.0 * uniform01(rng) - 1.0);
  return Potential(std::move(space), std::move(values));
}

Potential make_random_potential(std::size_t n, std::size_t alphabet_size,
                                std::uint64_t seed, double amplitude,
                                std::size_t state_budget) {
  if (n == 0 || alphabet_size == 0) {
    throw ConfigError("random potential: n and alphabet size must be positive");
  }
  return make_random_potential(
      ProductSpace::uniform(std::vector<std::size_t>(n, alphabet_size), state_budget), seed,
      amplitude);
}

Potential make_low_rank(SpacePtr space, std::size_t rank, std::uint64_t seed) {
  if (rank == 0) throw ConfigError("low-rank: rank must be at least 1");
  const std::size_t n = space->dims();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> features(rank, std::vector<double>(n));
  for (auto& u : features)
    for (double& v : u) v = 2.0 * uniform01(rng) - 1.0;

  std::vector<double> embed(space->symbol_total(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = space->radix(i);
    for (std::size_t s = 0; s < k; ++s) {
      embed[space->offset(i) + s] =
          k == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(s) / static_cast<double>(k - 1);
    }
  }
  const double dn = static_cast<double>(n);
  std::vector<double> values(space->state_count());
  for (std::size_t x = 0; x < values.size(); ++x) {
    double total = 0.0;
    for (const auto& u : features) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        proj += u[i] * embed[space->offset(i) + space->symbol(x, i)];
      }
      proj /= dn;
      total += proj * proj;
    }
    values[x] = dn * total;
  }
  return Potential(std::move(space), std::move(values));
}

SeparableFunction make_random_separable(SpacePtr space, std::uint64_t seed,
                                        double amplitude) {
  std::mt19937_64 rng(seed);
  std::vector<double> flat(space->symbol_total());
  for (double& v : flat) v = amplitude * (2.0 * uniform01(rng) - 1.0);
  return SeparableFunction(std::move(space), std::move(flat));
}

}  // namespace gibbsdecomp
