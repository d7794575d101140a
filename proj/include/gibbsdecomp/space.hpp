#pragma once

// Finite product spaces K_1 x ... x K_n, their canonical enumeration, and
// exact probability vectors over the enumerated configurations.
//
// Enumeration order is mixed radix with the LAST coordinate varying fastest.
// Every other module indexes configurations through this order.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gibbsdecomp {

inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 20;

// Raw description of a space; the ProductSpace constructor validates it.
// Empty optional members take defaults: discrete metric, uniform reference
// measure, reference point = first symbol.
struct SpaceSpec {
  std::vector<std::vector<std::string>> alphabets;
  std::vector<std::vector<std::vector<double>>> metrics;
  std::vector<std::vector<double>> reference_measures;
  std::vector<std::size_t> reference_points;
  std::size_t state_budget = kDefaultStateBudget;
};

class ProductSpace;
using SpacePtr = std::shared_ptr<const ProductSpace>;

class ProductSpace {
 public:
  explicit ProductSpace(SpaceSpec spec);

  static SpacePtr make(SpaceSpec spec);
  // Alphabets {"0",...,"k-1"} with discrete metrics and uniform lambda.
  static SpacePtr uniform(const std::vector<std::size_t>& sizes,
                          std::size_t state_budget = kDefaultStateBudget);
  // n copies of {"-1","+1"}, reference point -1, lambda(+1) = plus_weight.
  static SpacePtr spins(std::size_t n, double plus_weight = 0.5,
                        std::size_t state_budget = kDefaultStateBudget);

  std::size_t dims() const noexcept { return radix_.size(); }
  std::size_t state_count() const noexcept { return states_; }
  std::size_t radix(std::size_t i) const { return radix_[i]; }
  std::size_t stride(std::size_t i) const { return stride_[i]; }
  std::size_t state_budget() const noexcept { return budget_; }

  // Per-symbol arrays for all coordinates are concatenated; coordinate i
  // occupies [offset(i), offset(i) + radix(i)).
  std::size_t offset(std::size_t i) const { return offset_[i]; }
  std::size_t symbol_total() const noexcept { return offset_.back(); }

  const std::vector<std::string>& alphabet(std::size_t i) const {
    return alphabets_[i];
  }
  double metric(std::size_t i, std::size_t a, std::size_t b) const {
    return metrics_[offset2_[i] + a * radix_[i] + b];
  }
  std::span<const double> reference_measure(std::size_t i) const {
    return {lambda_.data() + offset_[i], radix_[i]};
  }
  std::span<const double> log_reference_measure(std::size_t i) const {
    return {log_lambda_.data() + offset_[i], radix_[i]};
  }
  std::size_t reference_point(std::size_t i) const { return ref_[i]; }
  const std::vector<std::size_t>& reference_points() const noexcept {
    return ref_;
  }

  std::size_t symbol(std::size_t index, std::size_t i) const {
    return (index / stride_[i]) % radix_[i];
  }
  std::size_t encode(std::span<const std::size_t> symbols) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  // Index of the configuration equal to `index` except coordinate i := s.
  std::size_t with_symbol(std::size_t index, std::size_t i,
                          std::size_t s) const {
    return index + (s - symbol(index, i)) * stride_[i];
  }

  // Normalized Hamming average d_n of the coordinate metrics.
  double distance(std::size_t x, std::size_t y) const;

  bool has_discrete_metrics() const noexcept { return discrete_; }
  bool has_uniform_reference() const noexcept { return uniform_; }
  bool is_binary() const;

  // Space on the listed coordinates (sorted, distinct, nonempty).
  SpacePtr subspace(std::span<const std::size_t> coords) const;
  SpacePtr with_reference_points(std::vector<std::size_t> points) const;
  SpacePtr with_reference_measures(
      std::vector<std::vector<double>> measures) const;

  SpaceSpec spec() const;
  bool same_shape(const ProductSpace& other) const;
  bool operator==(const ProductSpace& other) const;

 private:
  std::vector<std::vector<std::string>> alphabets_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> offset2_;
  std::vector<double> metrics_;
  std::vector<double> lambda_;
  std::vector<double> log_lambda_;
  std::vector<std::size_t> ref_;
  std::size_t states_ = 1;
  std::size_t budget_ = kDefaultStateBudget;
  bool discrete_ = true;
  bool uniform_ = true;
};

struct Config {
  std::vector<std::size_t> symbols;
  std::size_t index = 0;
};

// Exact probability vector over the canonical enumeration.
class Distribution {
 public:
  // Validates nonnegativity and total mass 1 within 1e-12.
  Distribution(SpacePtr space, std::vector<double> weights);

  // Normalizes a nonnegative vector with positive total.
  static Distribution normalized(SpacePtr space, std::vector<double> weights);
  static Distribution uniform(SpacePtr space);
  static Distribution point_mass(SpacePtr space, std::size_t index);
  // lambda_1 x ... x lambda_n expanded.
  static Distribution reference(SpacePtr space);

  const ProductSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t index) const { return weights_[index]; }
  std::size_t size() const noexcept { return weights_.size(); }

  double mass(std::span<const std::size_t> event) const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

std::vector<Config> enumerate_configs(const ProductSpace& space);

double hamming_distance(const ProductSpace& space, const Config& x,
                        const Config& y);

// Exact marginal onto `coords` (0-based, any order, no repeats). The result
// lives on the sub-product in increasing coordinate order.
Distribution marginal(const Distribution& dist,
                      std::span<const std::size_t> coords);

// dist( . | part). Throws ZeroMassError when dist(part) == 0.
Distribution condition(const Distribution& dist,
                       std::span<const std::size_t> part);

// Compensated sum; used wherever masses are compared against 1.
double stable_sum(std::span<const double> values);

}  // namespace gibbsdecomp
