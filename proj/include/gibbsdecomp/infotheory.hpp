#pragma once

// Entropies and divergences in nats, the modified chain rule, the Gibbs
// variational gap and dual total correlation.

#include <cstddef>
#include <span>
#include <vector>

#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/potential.hpp"
#include "gibbsdecomp/space.hpp"

namespace gibbsdecomp {

// Exact partition of {0, ..., states-1}. Part ids are compact, in order of
// first appearance of their smallest member; members are sorted.
class PartitionOfSpace {
 public:
  // labels[x] is any id; ids that never occur simply produce no part.
  static PartitionOfSpace from_labels(std::span<const std::size_t> labels);
  // Throws ConfigError unless the parts are disjoint, nonempty and cover.
  static PartitionOfSpace from_parts(std::size_t states,
                                     std::vector<std::vector<std::size_t>> parts);
  static PartitionOfSpace trivial(std::size_t states);
  static PartitionOfSpace singletons(std::size_t states);

  std::size_t size() const noexcept { return parts_.size(); }
  std::size_t state_count() const noexcept { return labels_.size(); }
  const std::vector<std::vector<std::size_t>>& parts() const noexcept { return parts_; }
  std::span<const std::size_t> part(std::size_t p) const { return parts_[p]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::vector<std::size_t>> parts_;
  std::vector<std::size_t> labels_;
};

double entropy(const Distribution& mu);
double entropy(std::span<const double> p);

// D(mu || nu); +inf when mu charges a nu-null configuration.
double kl(const Distribution& mu, const Distribution& nu);
double kl(const Distribution& mu, const ProductMeasure& xi);
// Per-coordinate sum, valid because both arguments are products.
double kl(const ProductMeasure& a, const ProductMeasure& b);
double kl(std::span<const double> p, std::span<const double> q);

// H_mu(P) = -sum_P mu(P) log mu(P).
double partition_entropy(const Distribution& mu, const PartitionOfSpace& P);

// |D(mu||gamma) - (-H_mu(P) + sum_P mu(P) D(mu_|P || gamma))|. Throws
// InfiniteDivergence when D(mu||gamma) = +inf.
double modified_chain_rule_residual(const Distribution& mu, const Distribution& gamma,
                                    const PartitionOfSpace& P);

// [D(nu||lambda) - int f dnu] - [D(mu||lambda) - int f dmu], mu = gibbs(f).
double variational_gap(const Distribution& nu, const Potential& f);

// H(x) - sum_i H(x_i | x_rest) from the table.
double dtc_definitional(const Distribution& mu);

// int D(xi_{grad f(x,.)} || lambda) mu(dx) - D(mu || lambda).
double dtc_gibbs(const Potential& f);
double dtc_gibbs(const GibbsMeasure& mu, const GradientMap& grad);

// xi_{grad f(x,.)} for a precomputed gradient table.
ProductMeasure gradient_product(const GradientMap& grad, std::size_t x);

}  // namespace gibbsdecomp
