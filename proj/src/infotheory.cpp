#include "gibbsdecomp/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gibbsdecomp/errors.hpp"

namespace gibbsdecomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

PartitionOfSpace PartitionOfSpace::from_labels(std::span<const std::size_t> labels) {
  PartitionOfSpace P;
  P.labels_.resize(labels.size());
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    auto [it, fresh] = ids.try_emplace(labels[x], P.parts_.size());
    if (fresh) P.parts_.emplace_back();
    P.parts_[it->second].push_back(x);
    P.labels_[x] = it->second;
  }
  return P;
}

PartitionOfSpace PartitionOfSpace::from_parts(std::size_t states,
                                              std::vector<std::vector<std::size_t>> parts) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> labels(states, kUnset);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].empty()) throw ConfigError("partition: empty part");
    for (std::size_t x : parts[p]) {
      if (x >= states) throw ConfigError("partition: configuration index out of range");
      if (labels[x] != kUnset) throw ConfigError("partition: parts overlap");
      labels[x] = p;
    }
  }
  if (std::find(labels.begin(), labels.end(), kUnset) != labels.end()) {
    throw ConfigError("partition: parts do not cover the state space");
  }
  return from_labels(labels);
}

PartitionOfSpace PartitionOfSpace::trivial(std::size_t states) {
  return from_labels(std::vector<std::size_t>(states, 0));
}

PartitionOfSpace PartitionOfSpace::singletons(std::size_t states) {
  std::vector<std::size_t> labels(states);
  for (std::size_t x = 0; x < states; ++x) labels[x] = x;
  return from_labels(labels);
}

// ---------------------------------------------------------------------------

double entropy(std::span<const double> p) {
  std::vector<double> terms(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) terms[k] = -xlogx(p[k]);
  return stable_sum(terms);
}

double entropy(const Distribution& mu) { return entropy(mu.weights()); }

double kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ConfigError("kl: arguments differ in length");
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return kInf;
    terms.push_back(p[k] * (std::log(p[k]) - std::log(q[k])));
  }
  return std::max(0.0, stable_sum(terms));
}

double kl(const Distribution& mu, const Distribution& nu) {
  if (!mu.space().same_shape(nu.space())) {
    throw ConfigError("kl: distributions live on different spaces");
  }
  return kl(mu.weights(), nu.weights());
}

double kl(const Distribution& mu, const ProductMeasure& xi) {
  if (!mu.space().same_shape(xi.space())) {
    throw ConfigError("kl: distribution and product measure live on different spaces");
  }
  std::vector<double> terms;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    const double p = mu[x];
    if (p == 0.0) continue;
    const double lq = xi.log_weight(x);
    if (lq == -kInf) return kInf;
    terms.push_back(p * (std::log(p) - lq));
  }
  return std::max(0.0, stable_sum(terms));
}

double kl(const ProductMeasure& a, const ProductMeasure& b) {
  if (!a.space().same_shape(b.space())) {
    throw ConfigError("kl: product measures live on different spaces");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.space().dims(); ++i) {
    auto p = a.factor(i);
    auto lp = a.log_factor(i);
    auto lq = b.log_factor(i);
    double part = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (p[s] == 0.0) continue;
      if (lq[s] == -kInf) return kInf;
      part += p[s] * (lp[s] - lq[s]);
    }
    total += std::max(0.0, part);
  }
  return total;
}

double partition_entropy(const Distribution& mu, const PartitionOfSpace& P) {
  std::vector<double> masses(P.size());
  for (std::size_t p = 0; p < P.size(); ++p) masses[p] = mu.mass(P.part(p));
  return entropy(masses);
}

double modified_chain_rule_residual(const Distribution& mu, const Distribution& gamma,
                                    const PartitionOfSpace& P) {
  const double lhs = kl(mu, gamma);
  if (!std::isfinite(lhs)) {
    throw InfiniteDivergence("modified chain rule: D(mu || gamma) is infinite");
  }
  std::vector<double> terms{-partition_entropy(mu, P)};
  for (std::size_t p = 0; p < P.size(); ++p) {
    const double mass = mu.mass(P.part(p));
    if (mass == 0.0) continue;
    terms.push_back(mass * kl(condition(mu, P.part(p)), gamma));
  }
  return std::abs(lhs - stable_sum(terms));
}

namespace {

double expectation(const Distribution& mu, std::span<const double> f) {
  std::vector<double> terms(mu.size());
  for (std::size_t x = 0; x < mu.size(); ++x) terms[x] = mu[x] * f[x];
  return stable_sum(terms);
}

}  // namespace

double variational_gap(const Distribution& nu, const Potential& f) {
  if (!nu.space().same_shape(f.space())) {
    throw ConfigError("variational_gap: measure and potential live on different spaces");
  }
  const Distribution lambda = Distribution::reference(f.space_ptr());
  const double d_nu = kl(nu, lambda);
  if (!std::isfinite(d_nu)) {
    throw InfiniteDivergence("variational_gap: D(nu || lambda) is infinite");
  }
  const GibbsMeasure mu = gibbs(f);
  const double d_mu = kl(mu.dist, lambda);
  return (d_nu - expectation(nu, f.values())) - (d_mu - expectation(mu.dist, f.values()));
}

double dtc_definitional(const Distribution& mu) {
  const ProductSpace& s = mu.space();
  std::vector<double> terms{entropy(mu)};
  for (std::size_t i = 0; i < s.dims(); ++i) {
    // H(x_i | rest) = -sum_x mu(x) log(mu(x) / mu(rest(x))).
    const std::size_t k = s.radix(i);
    std::vector<double> cond;
    for (std::size_t x = 0; x < mu.size(); ++x) {
      if (s.symbol(x, i) != 0) continue;
      double block = 0.0;
      for (std::size_t a = 0; a < k; ++a) block += mu[s.with_symbol(x, i, a)];
      if (block == 0.0) continue;
      for (std::size_t a = 0; a < k; ++a) {
        const double p = mu[s.with_symbol(x, i, a)];
        if (p > 0.0) cond.push_back(p * std::log(p / block));
      }
    }
    terms.push_back(stable_sum(cond));
  }
  return stable_sum(terms);
}

ProductMeasure gradient_product(const GradientMap& grad, std::size_t x) {
  const ProductSpace& s = grad.space();
  std::vector<double> logs(grad.width());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    auto ll = s.log_reference_measure(i);
    for (std::size_t a = 0; a < ll.size(); ++a) {
      logs[s.offset(i) + a] = grad.at(x, s.offset(i) + a) + ll[a];
    }
  }
  return ProductMeasure::from_log_weights(grad.space_ptr(), std::move(logs));
}

double dtc_gibbs(const GibbsMeasure& mu, const GradientMap& grad) {
  const ProductSpace& s = mu.dist.space();
  // D(xi_g || lambda) = sum_i [ sum_a xi_i(a) g_i(a) - log sum_a lambda_i(a) e^{g_i(a)} ].
  std::vector<double> terms(mu.dist.size());
  std::vector<double> buf;
  for (std::size_t x = 0; x < mu.dist.size(); ++x) {
    const double w = mu.dist[x];
    if (w == 0.0) {
      terms[x] = 0.0;
      continue;
    }
    double d = 0.0;
    for (std::size_t i = 0; i < s.dims(); ++i) {
      auto ll = s.log_reference_measure(i);
      buf.resize(ll.size());
      for (std::size_t a = 0; a < ll.size(); ++a) buf[a] = grad.at(x, s.offset(i) + a) + ll[a];
      const double lse = log_sum_exp(buf);
      double part = 0.0;
      for (std::size_t a = 0; a < ll.size(); ++a) {
        part += std::exp(buf[a] - lse) * (buf[a] - lse - ll[a]);
      }
      d += std::max(0.0, part);
    }
    terms[x] = w * d;
  }
  std::vector<double> dmu;
  dmu.reserve(mu.dist.size());
  for (std::size_t x = 0; x < mu.dist.size(); ++x) {
    const double w = mu.dist[x];
    if (w == 0.0) continue;
    double ll = 0.0;
    for (std::size_t i = 0; i < s.dims(); ++i) {
      ll += s.log_reference_measure(i)[s.symbol(x, i)];
    }
    dmu.push_back(w * (mu.log_weights[x] - ll));
  }
  return stable_sum(terms) - stable_sum(dmu);
}

double dtc_gibbs(const Potential& f) {
  return dtc_gibbs(gibbs(f), GradientMap(f));
}

}  // namespace gibbsdecomp
