#pragma once

// Example potentials used by the tests, the acceptance suite and the CLI.

#include <cstdint>
#include <random>
#include <vector>

#include "gibbsdecomp/potential.hpp"

namespace gibbsdecomp {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Curie-Weiss on {-1,+1}^n: f(x) = beta/(2n) (sum x_i)^2 + h sum x_i, with
// reference point -1 and lambda(+1) = plus_weight (0.5 gives uniform).
Potential make_curie_weiss(std::size_t n, double beta, double h,
                           double plus_weight = 0.5,
                           std::size_t state_budget = kDefaultStateBudget);

// i.i.d. values in [-amplitude, amplitude], reproducible from the seed.
Potential make_random_potential(SpacePtr space, std::uint64_t seed, double amplitude);
Potential make_random_potential(std::size_t n, std::size_t alphabet_size,
                                std::uint64_t seed, double amplitude,
                                std::size_t state_budget = kDefaultStateBudget);

// f(x) = n * sum_j (<u^j, v(x)> / n)^2 with seeded u^j in [-1, 1]^n and
// v(x)_i = -1 + 2 x_i / (|K_i| - 1) embedding each alphabet in [-1, 1].
Potential make_low_rank(SpacePtr space, std::size_t rank, std::uint64_t seed);

// sum_i g_i(x_i) with i.i.d. g_i(s) in [-amplitude, amplitude].
SeparableFunction make_random_separable(SpacePtr space, std::uint64_t seed,
                                        double amplitude);

}  // namespace gibbsdecomp
