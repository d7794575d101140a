#pragma once

// Potentials f on a finite product space, discrete partial gradients
//   d_i f(x, y) = f(x with x_i := y) - f(x with x_i := *_i),
// the discrete gradient x -> grad f(x, .) = sum_i d_i f(x, .), and
// additively separable functions sum_i g_i(x_i).

#include <cstddef>
#include <span>
#include <vector>

#include "gibbsdecomp/kernels.hpp"
#include "gibbsdecomp/space.hpp"

namespace gibbsdecomp {

// Dense table of f over the canonical enumeration.
class Potential {
 public:
  Potential(SpacePtr space, std::vector<double> values);
  static Potential zero(SpacePtr space);

  const ProductSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(std::size_t index) const { return values_[index]; }

  // Same table on a space of identical shape (other reference points or
  // reference measures).
  Potential on(SpacePtr space) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

// g(x) = sum_i g_i(x_i), stored with g_i(*_i) = 0 for every i. Per-coordinate
// vectors are concatenated using ProductSpace::offset.
class SeparableFunction {
 public:
  // Parts are shifted so that g_i(*_i) = 0; the represented function changes
  // by an additive constant only.
  SeparableFunction(SpacePtr space, std::vector<double> flat_parts);
  static SeparableFunction from_parts(SpacePtr space,
                                      const std::vector<std::vector<double>>& parts);
  static SeparableFunction zero(SpacePtr space);

  const ProductSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> flat() const noexcept { return flat_; }
  std::span<const double> part(std::size_t i) const {
    return {flat_.data() + space_->offset(i), space_->radix(i)};
  }
  double operator()(std::size_t index) const;
  double eval(const Config& x) const;

  bool operator==(const SeparableFunction& other) const {
    return flat_ == other.flat_;
  }

 private:
  SpacePtr space_;
  std::vector<double> flat_;
};

double eval(const Potential& f, const Config& x);

double partial_gradient(const Potential& f, std::size_t x, std::size_t coord,
                        std::size_t symbol);
double partial_gradient(const Potential& f, const Config& x, std::size_t coord,
                        std::size_t symbol);

SeparableFunction gradient(const Potential& f, std::size_t x);
SeparableFunction gradient(const Potential& f, const Config& x);

// sup_z |a(z) - b(z)| in closed form: max(sum_i max h_i, -sum_i min h_i) with
// h_i = a_i - b_i. Throws ConfigError when the spaces differ in shape.
double sep_sup_norm(const SeparableFunction& a, const SeparableFunction& b);

// The separable function as a dense potential table.
Potential to_potential(const SeparableFunction& g);

inline constexpr std::size_t kDefaultGradientBudget = std::size_t{1} << 26;

// All gradients grad f(x, .) for every configuration x, column-major: column
// (offset(i) + s) holds d_i f(x, s) for all x. Rows are normalized separable
// functions by construction.
class GradientMap {
 public:
  explicit GradientMap(const Potential& f,
                       std::size_t entry_budget = kDefaultGradientBudget);

  const ProductSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t width() const noexcept { return width_; }

  double at(std::size_t x, std::size_t column) const {
    return data_[column * rows_ + x];
  }
  std::span<const double> column(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  std::vector<double> row_values(std::size_t x) const;
  SeparableFunction row(std::size_t x) const;

  kernels::ColumnTable table() const;

  // out[k] = || row(begin + k) - center || for k < end - begin.
  void distances(std::span<const double> center, std::size_t begin,
                 std::size_t end, std::span<double> out) const;
  double distance(std::size_t x, std::size_t y) const;

 private:
  SpacePtr space_;
  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

}  // namespace gibbsdecomp
