#include "gibbsdecomp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbsdecomp/errors.hpp"

namespace gibbsdecomp {

Potential::Potential(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw ConfigError("potential requires a space");
  if (values_.size() != space_->state_count()) {
    std::ostringstream os;
    os << "field 'table': expected " << space_->state_count() << " values, got "
       << values_.size();
    throw ConfigError(os.str());
  }
  for (std::size_t x = 0; x < values_.size(); ++x) {
    if (!std::isfinite(values_[x])) {
      std::ostringstream os;
      os << "field 'table': entry " << x << " is not finite";
      throw ConfigError(os.str());
    }
  }
}

Potential Potential::zero(SpacePtr space) {
  const std::size_t n = space->state_count();
  return Potential(std::move(space), std::vector<double>(n, 0.0));
}

Potential Potential::on(SpacePtr space) const {
  if (!space->same_shape(*space_)) {
    throw ConfigError("potential: target space has a different shape");
  }
  return Potential(std::move(space), values_);
}

// ---------------------------------------------------------------------------

SeparableFunction::SeparableFunction(SpacePtr space, std::vector<double> flat_parts)
    : space_(std::move(space)), flat_(std::move(flat_parts)) {
  if (!space_) throw ConfigError("separable function requires a space");
  if (flat_.size() != space_->symbol_total()) {
    throw ConfigError("separable function: wrong number of part values");
  }
  for (std::size_t i = 0; i < space_->dims(); ++i) {
    const std::size_t base = space_->offset(i);
    const double pin = flat_[base + space_->reference_point(i)];
    for (std::size_t s = 0; s < space_->radix(i); ++s) {
      if (!std::isfinite(flat_[base + s])) {
        throw ConfigError("separable function: part values must be finite");
      }
      flat_[base + s] -= pin;
    }
  }
}

SeparableFunction SeparableFunction::from_parts(
    SpacePtr space, const std::vector<std::vector<double>>& parts) {
  if (parts.size() != space->dims()) {
    throw ConfigError("separable function: expected one part per coordinate");
  }
  std::vector<double> flat;
  flat.reserve(space->symbol_total());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != space->radix(i)) {
      throw ConfigError("separable function: part length must equal |K_i|");
    }
    flat.insert(flat.end(), parts[i].begin(), parts[i].end());
  }
  return SeparableFunction(std::move(space), std::move(flat));
}

SeparableFunction SeparableFunction::zero(SpacePtr space) {
  const std::size_t w = space->symbol_total();
  return SeparableFunction(std::move(space), std::vector<double>(w, 0.0));
}

double SeparableFunction::operator()(std::size_t index) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < space_->dims(); ++i) {
    sum += flat_[space_->offset(i) + space_->symbol(index, i)];
  }
  return sum;
}

double SeparableFunction::eval(const Config& x) const {
  return (*this)(space_->encode(x.symbols));
}

// ---------------------------------------------------------------------------

double eval(const Potential& f, const Config& x) {
  return f(f.space().encode(x.symbols));
}

double partial_gradient(const Potential& f, std::size_t x, std::size_t coord,
                        std::size_t symbol) {
  const ProductSpace& s = f.space();
  if (coord >= s.dims() || symbol >= s.radix(coord) || x >= s.state_count()) {
    throw ConfigError("partial_gradient: coordinate, symbol or configuration out of range");
  }
  return f(s.with_symbol(x, coord, symbol)) -
         f(s.with_symbol(x, coord, s.reference_point(coord)));
}

double partial_gradient(const Potential& f, const Config& x, std::size_t coord,
                        std::size_t symbol) {
  return partial_gradient(f, f.space().encode(x.symbols), coord, symbol);
}

SeparableFunction gradient(const Potential& f, std::size_t x) {
  const ProductSpace& s = f.space();
  std::vector<double> flat(s.symbol_total());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    for (std::size_t a = 0; a < s.radix(i); ++a) {
      flat[s.offset(i) + a] = partial_gradient(f, x, i, a);
    }
  }
  return SeparableFunction(f.space_ptr(), std::move(flat));
}

SeparableFunction gradient(const Potential& f, const Config& x) {
  return gradient(f, f.space().encode(x.symbols));
}

double sep_sup_norm(const SeparableFunction& a, const SeparableFunction& b) {
  const ProductSpace& s = a.space();
  if (!s.same_shape(b.space())) {
    throw ConfigError("sep_sup_norm: separable functions live on different spaces");
  }
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i < s.dims(); ++i) {
    auto pa = a.part(i);
    auto pb = b.part(i);
    double hi = pa[0] - pb[0];
    double lo = hi;
    for (std::size_t k = 1; k < pa.size(); ++k) {
      const double d = pa[k] - pb[k];
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    pos += hi;
    neg += lo;
  }
  return std::max(pos, -neg);
}

Potential to_potential(const SeparableFunction& g) {
  std::vector<double> values(g.space().state_count());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = g(x);
  return Potential(g.space_ptr(), std::move(values));
}

// ---------------------------------------------------------------------------

GradientMap::GradientMap(const Potential& f, std::size_t entry_budget)
    : space_(f.space_ptr()),
      rows_(f.space().state_count()),
      width_(f.space().symbol_total()) {
  const ProductSpace& s = *space_;
  if (width_ != 0 && rows_ > entry_budget / width_) {
    std::ostringstream os;
    os << "gradient map needs " << rows_ << " x " << width_
       << " entries, budget is " << entry_budget;
    throw BudgetExceeded(os.str());
  }
  offsets_.resize(s.dims() + 1);
  for (std::size_t i = 0; i <= s.dims(); ++i) {
    offsets_[i] = (i == s.dims()) ? s.symbol_total() : s.offset(i);
  }
  data_.assign(rows_ * width_, 0.0);
  const auto values = f.values();
  for (std::size_t i = 0; i < s.dims(); ++i) {
    const std::size_t stride = s.stride(i);
    const std::size_t star = s.reference_point(i);
    for (std::size_t a = 0; a < s.radix(i); ++a) {
      double* col = data_.data() + (s.offset(i) + a) * rows_;
      if (a == star) continue;  // identically zero
      for (std::size_t x = 0; x < rows_; ++x) {
        const std::size_t base = x - s.symbol(x, i) * stride;
        col[x] = values[base + a * stride] - values[base + star * stride];
      }
    }
  }
}

std::vector<double> GradientMap::row_values(std::size_t x) const {
  std::vector<double> out(width_);
  for (std::size_t c = 0; c < width_; ++c) out[c] = data_[c * rows_ + x];
  return out;
}

SeparableFunction GradientMap::row(std::size_t x) const {
  return SeparableFunction(space_, row_values(x));
}

kernels::ColumnTable GradientMap::table() const {
  return {data_.data(), rows_, offsets_};
}

void GradientMap::distances(std::span<const double> center, std::size_t begin,
                            std::size_t end, std::span<double> out) const {
  if (center.size() != width_ || end > rows_ || begin > end ||
      out.size() < end - begin) {
    throw ConfigError("GradientMap::distances: bad arguments");
  }
  if (begin == end) return;
  kernels::active().sup_distance(table(), center.data(), begin, end, out.data());
}

double GradientMap::distance(std::size_t x, std::size_t y) const {
  const auto center = row_values(y);
  double out = 0.0;
  kernels::active().sup_distance(table(), center.data(), x, x + 1, &out);
  return out;
}

}  // namespace gibbsdecomp
