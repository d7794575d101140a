#pragma once

// Greedy covering of the gradient set {grad f(x,.)} by sup-norm balls and
// its pullback to a partition of the configurations.

#include <cstddef>
#include <vector>

#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/potential.hpp"

namespace gibbsdecomp {

inline constexpr std::size_t kDefaultPairBudget = std::size_t{1} << 24;

struct GradientCover {
  // Configuration indices whose gradients are the ball centers, in the
  // order the greedy pass picked them.
  std::vector<std::size_t> centers;
  // Center id (position in `centers`) per configuration.
  std::vector<std::size_t> assignment;
  double delta = 0.0;
  std::size_t n = 0;
  // max_x || grad f(x,.) - grad f(center(x),.) ||
  double radius_check = 0.0;

  std::size_t part_count() const noexcept { return centers.size(); }
  PartitionOfSpace partition() const;
};

// Farthest-point greedy seeded at configuration 0: keep adding the
// configuration farthest from the chosen centers (lowest index on ties)
// until every gradient is within delta*n/2 of a center; then assign each
// configuration to its nearest center (lowest center id on ties).
GradientCover greedy_cover(const GradientMap& grad, double delta);
GradientCover greedy_cover(const Potential& f, double delta);

// log(part count) / n.
double covering_exponent(const GradientCover& cover);

struct HypothesisCheck {
  // Largest sup-norm distance between gradients in one part.
  double diameter = 0.0;
  // diameter / n.
  double delta_eff = 0.0;
  // False when some part exceeded the pair budget and its diameter was
  // replaced by twice its radius around its first member.
  bool exact = true;
  std::vector<double> part_diameters;
};

HypothesisCheck verify_partition_hypothesis(const GradientMap& grad,
                                            const PartitionOfSpace& P,
                                            std::size_t pair_budget = kDefaultPairBudget);
HypothesisCheck verify_partition_hypothesis(const Potential& f, const PartitionOfSpace& P,
                                            std::size_t pair_budget = kDefaultPairBudget);

// Largest sup-norm distance between any two gradients (the one-part case).
HypothesisCheck gradient_diameter(const GradientMap& grad,
                                  std::size_t pair_budget = kDefaultPairBudget);

}  // namespace gibbsdecomp
