#include "gibbsdecomp/gibbs.hpp"

#include <cmath>
#include <limits>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/kernels.hpp"

namespace gibbsdecomp {

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = kernels::active().max_value(v.data(), v.size());
  if (!std::isfinite(m)) return m;
  std::vector<double> terms(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) terms[k] = std::exp(v[k] - m);
  return m + std::log(stable_sum(terms));
}

ProductMeasure::ProductMeasure(SpacePtr space, std::vector<double> factors)
    : space_(std::move(space)), factors_(std::move(factors)) {
  if (!space_) throw ConfigError("product measure requires a space");
  if (factors_.size() != space_->symbol_total()) {
    throw ConfigError("product measure: wrong number of factor entries");
  }
  log_factors_.resize(factors_.size());
  for (std::size_t i = 0; i < space_->dims(); ++i) {
    auto f = factor(i);
    for (double p : f) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ConfigError("product measure: factor entries must be nonnegative");
      }
    }
    if (std::abs(stable_sum(f) - 1.0) > 1e-12) {
      throw ConfigError("product measure: each factor must sum to 1");
    }
  }
  for (std::size_t k = 0; k < factors_.size(); ++k) log_factors_[k] = std::log(factors_[k]);
}

ProductMeasure ProductMeasure::from_log_weights(SpacePtr space,
                                                std::vector<double> log_weights) {
  if (log_weights.size() != space->symbol_total()) {
    throw ConfigError("product measure: wrong number of log weights");
  }
  ProductMeasure pm;
  pm.factors_.resize(log_weights.size());
  pm.log_factors_ = std::move(log_weights);
  for (std::size_t i = 0; i < space->dims(); ++i) {
    std::span<double> lf{pm.log_factors_.data() + space->offset(i), space->radix(i)};
    const double lse = log_sum_exp(lf);
    for (std::size_t s = 0; s < lf.size(); ++s) {
      lf[s] -= lse;
      pm.factors_[space->offset(i) + s] = std::exp(lf[s]);
    }
  }
  pm.space_ = std::move(space);
  return pm;
}

ProductMeasure ProductMeasure::reference(SpacePtr space) {
  std::vector<double> logs(space->symbol_total());
  for (std::size_t i = 0; i < space->dims(); ++i) {
    auto ll = space->log_reference_measure(i);
    std::copy(ll.begin(), ll.end(), logs.begin() + space->offset(i));
  }
  return from_log_weights(std::move(space), std::move(logs));
}

double ProductMeasure::weight(std::size_t x) const {
  double p = 1.0;
  for (std::size_t i = 0; i < space_->dims(); ++i) {
    p *= factors_[space_->offset(i) + space_->symbol(x, i)];
  }
  return p;
}

double ProductMeasure::log_weight(std::size_t x) const {
  double lp = 0.0;
  for (std::size_t i = 0; i < space_->dims(); ++i) {
    lp += log_factors_[space_->offset(i) + space_->symbol(x, i)];
  }
  return lp;
}

std::vector<double> ProductMeasure::joint_weights() const {
  // Built coordinate by coordinate: block of stride(i) repeated.
  const ProductSpace& s = *space_;
  std::vector<double> w(s.state_count(), 1.0);
  for (std::size_t i = 0; i < s.dims(); ++i) {
    auto f = factor(i);
    for (std::size_t x = 0; x < w.size(); ++x) w[x] *= f[s.symbol(x, i)];
  }
  return w;
}

Distribution ProductMeasure::to_distribution() const {
  return Distribution::normalized(space_, joint_weights());
}

GibbsMeasure gibbs(const Potential& f) {
  const ProductSpace& s = f.space();
  std::vector<double> logw(s.state_count());
  for (std::size_t x = 0; x < logw.size(); ++x) {
    double lw = f(x);
    for (std::size_t i = 0; i < s.dims(); ++i) {
      lw += s.log_reference_measure(i)[s.symbol(x, i)];
    }
    logw[x] = lw;
  }
  const double log_z = log_sum_exp(logw);
  std::vector<double> w(logw.size());
  for (std::size_t x = 0; x < w.size(); ++x) {
    logw[x] -= log_z;
    w[x] = std::exp(logw[x]);
  }
  return GibbsMeasure{Distribution::normalized(f.space_ptr(), std::move(w)),
                      std::move(logw), log_z, f};
}

ProductMeasure product_gibbs(const SeparableFunction& g) {
  const ProductSpace& s = g.space();
  std::vector<double> logs(s.symbol_total());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    auto part = g.part(i);
    auto ll = s.log_reference_measure(i);
    for (std::size_t a = 0; a < part.size(); ++a) logs[s.offset(i) + a] = part[a] + ll[a];
  }
  return ProductMeasure::from_log_weights(g.space_ptr(), std::move(logs));
}

std::vector<double> conditional_at(const Distribution& mu, std::size_t coord,
                                   std::size_t x) {
  const ProductSpace& s = mu.space();
  if (coord >= s.dims()) throw ConfigError("conditional: coordinate out of range");
  std::vector<double> out(s.radix(coord));
  double total = 0.0;
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = mu[s.with_symbol(x, coord, a)];
    total += out[a];
  }
  if (!(total > 0.0)) throw ZeroMassError("conditional: conditioning event has zero mass");
  for (double& p : out) p /= total;
  return out;
}

std::vector<double> conditional(const Distribution& mu, std::size_t coord,
                                std::span<const std::size_t> rest) {
  const ProductSpace& s = mu.space();
  if (coord >= s.dims()) throw ConfigError("conditional: coordinate out of range");
  if (rest.size() + 1 != s.dims()) {
    throw ConfigError("conditional: expected n-1 conditioning symbols");
  }
  std::vector<std::size_t> full(s.dims(), 0);
  for (std::size_t i = 0, j = 0; i < s.dims(); ++i) {
    if (i != coord) full[i] = rest[j++];
  }
  return conditional_at(mu, coord, s.encode(full));
}

}  // namespace gibbsdecomp
