#pragma once

// Gibbs measures mu(dx) = e^{f(x)} lambda(dx) / Z, product Gibbs measures xi_g
// of separable functions, and exact single-site conditionals.

#include <cstddef>
#include <span>
#include <vector>

#include "gibbsdecomp/potential.hpp"
#include "gibbsdecomp/space.hpp"

namespace gibbsdecomp {

// Product measure kept in factorized form, with log-factors alongside so
// that divergences never take the log of an underflowed factor.
class ProductMeasure {
 public:
  // Factors concatenated by ProductSpace::offset; each must be a
  // probability vector (within 1e-12).
  ProductMeasure(SpacePtr space, std::vector<double> factors);
  // Each coordinate normalized in the log domain.
  static ProductMeasure from_log_weights(SpacePtr space, std::vector<double> log_weights);
  static ProductMeasure reference(SpacePtr space);

  const ProductSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> factor(std::size_t i) const {
    return {factors_.data() + space_->offset(i), space_->radix(i)};
  }
  std::span<const double> log_factor(std::size_t i) const {
    return {log_factors_.data() + space_->offset(i), space_->radix(i)};
  }
  std::span<const double> factors() const noexcept { return factors_; }
  std::span<const double> log_factors() const noexcept { return log_factors_; }

  double weight(std::size_t x) const;
  double log_weight(std::size_t x) const;
  std::vector<double> joint_weights() const;
  Distribution to_distribution() const;

 private:
  ProductMeasure() = default;
  SpacePtr space_;
  std::vector<double> factors_;
  std::vector<double> log_factors_;
};

struct GibbsMeasure {
  Distribution dist;
  // log mu(x), exact even where mu(x) underflows.
  std::vector<double> log_weights;
  // log of the integral of e^f against lambda_1 x ... x lambda_n.
  double log_z;
  Potential potential;
};

GibbsMeasure gibbs(const Potential& f);

// factor_i(s) proportional to e^{g_i(s)} lambda_i(s).
ProductMeasure product_gibbs(const SeparableFunction& g);

// mu(x_i = . | x_{[n]\i} = rest), rest listing the other n-1 symbols in
// coordinate order. Throws ZeroMassError when the event has no mass.
std::vector<double> conditional(const Distribution& mu, std::size_t coord,
                                std::span<const std::size_t> rest);
// Same, taking the other coordinates from configuration x.
std::vector<double> conditional_at(const Distribution& mu, std::size_t coord,
                                   std::size_t x);

// log sum_k exp(v_k), max-shifted.
double log_sum_exp(std::span<const double> v);

}  // namespace gibbsdecomp
