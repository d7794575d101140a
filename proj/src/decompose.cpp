#include "gibbsdecomp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/parallel.hpp"
#include "gibbsdecomp/transport.hpp"

namespace gibbsdecomp {

namespace {

constexpr double kTieTolerance = 1e-12;

struct PartData {
  double mass = 0.0;
  std::vector<double> cond;       // mu_|P over the members of P
  std::vector<double> marginals;  // per-coordinate marginals of mu_|P, flat
  double entropy = 0.0;
  // Distinct gradient rows: lowest member carrying the row, and the total
  // mu_|P weight of the members that share it.
  std::vector<std::size_t> rep_member;
  std::vector<double> rep_weight;
};

struct PairResult {
  double kl = 0.0;
  double transport = 0.0;
  bool exact = true;
};

// log xi_{g,i}(a) for the gradient row of x.
std::vector<double> log_factors(const GradientMap& grad, std::size_t x) {
  const ProductSpace& s = grad.space();
  std::vector<double> lf(grad.width());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    auto ll = s.log_reference_measure(i);
    std::span<double> seg(lf.data() + s.offset(i), s.radix(i));
    for (std::size_t a = 0; a < seg.size(); ++a) seg[a] = grad.at(x, s.offset(i) + a) + ll[a];
    const double lse = log_sum_exp(seg);
    for (double& v : seg) v -= lse;
  }
  return lf;
}

}  // namespace

double integrals_equal_residual(const GibbsMeasure& mu, const GradientMap& grad) {
  const ProductSpace& s = mu.dist.space();
  std::vector<double> lhs, rhs;
  for (std::size_t x = 0; x < mu.dist.size(); ++x) {
    const double w = mu.dist[x];
    if (w == 0.0) continue;
    double diag = 0.0;
    for (std::size_t i = 0; i < s.dims(); ++i) diag += grad.at(x, s.offset(i) + s.symbol(x, i));
    lhs.push_back(w * diag);
    const auto lf = log_factors(grad, x);
    double avg = 0.0;
    for (std::size_t c = 0; c < grad.width(); ++c) avg += std::exp(lf[c]) * grad.at(x, c);
    rhs.push_back(w * avg);
  }
  return std::abs(stable_sum(lhs) - stable_sum(rhs));
}

double integrals_equal_residual(const Potential& f) {
  return integrals_equal_residual(gibbs(f), GradientMap(f));
}

DecompositionReport decompose(const Potential& f, const PartitionOfSpace& P,
                              const DecomposeOptions& options) {
  const ProductSpace& s = f.space();
  if (P.state_count() != s.state_count()) {
    throw ConfigError("decompose: partition does not match the state space");
  }
  const std::size_t n = s.dims();
  const std::size_t N = s.state_count();
  const std::size_t W = s.symbol_total();
  const double dn = static_cast<double>(n);

  const GibbsMeasure mu = gibbs(f);
  const GradientMap grad(f);

  DecompositionReport r;
  r.n = n;
  r.states = N;
  r.part_count = P.size();
  r.log_z = mu.log_z;
  r.dtc = dtc_definitional(mu.dist);
  r.dtc_gibbs = dtc_gibbs(mu, grad);
  r.partition_entropy = partition_entropy(mu.dist, P);
  const HypothesisCheck hyp = verify_partition_hypothesis(grad, P, options.pair_budget);
  r.diameter = hyp.diameter;
  r.delta_eff = hyp.delta_eff;
  r.diameter_exact = hyp.exact;
  r.epsilon = n ? std::log(static_cast<double>(P.size())) / dn : 0.0;
  r.integrals_residual = integrals_equal_residual(mu, grad);
  r.transport_budget = options.transport_budget;
  r.transport_computed = options.transport;

  // Per-part conditioned measures, entropies, marginals and distinct rows.
  std::vector<PartData> data(P.size());
  for (std::size_t p = 0; p < P.size(); ++p) {
    PartData& d = data[p];
    const auto part = P.part(p);
    d.mass = mu.dist.mass(part);
    if (d.mass == 0.0) continue;
    d.cond.resize(part.size());
    for (std::size_t k = 0; k < part.size(); ++k) d.cond[k] = mu.dist[part[k]] / d.mass;
    d.entropy = entropy(d.cond);
    d.marginals.assign(W, 0.0);
    for (std::size_t k = 0; k < part.size(); ++k)
      for (std::size_t i = 0; i < n; ++i)
        d.marginals[s.offset(i) + s.symbol(part[k], i)] += d.cond[k];
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t k = 0; k < part.size(); ++k) {
      auto [it, fresh] = seen.try_emplace(grad.row_values(part[k]), d.rep_member.size());
      if (fresh) {
        d.rep_member.push_back(k);
        d.rep_weight.push_back(0.0);
      }
      d.rep_weight[it->second] += d.cond[k];
    }
  }

  // One task per (part, distinct gradient row).
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t q = 0; q < data[p].rep_member.size(); ++q) tasks.emplace_back(p, q);
  std::vector<PairResult> results(tasks.size());

  parallel_for(tasks.size(), [&](std::size_t t) {
    const auto [p, q] = tasks[t];
    const PartData& d = data[p];
    const auto part = P.part(p);
    const std::size_t y = part[d.rep_member[q]];
    const auto lf = log_factors(grad, y);
    // D(mu_|P || xi) = -H(mu_|P) - sum_i sum_a marginal_i(a) log xi_i(a).
    std::vector<double> terms{-d.entropy};
    for (std::size_t c = 0; c < W; ++c)
      if (d.marginals[c] > 0.0) terms.push_back(-d.marginals[c] * lf[c]);
    PairResult& res = results[t];
    res.kl = std::max(0.0, stable_sum(terms));
    if (!options.transport) {
      res.transport = std::sqrt(res.kl / (2.0 * dn));
      res.exact = false;
      return;
    }
    std::size_t support = 0;
    for (double w : d.cond) support += w > 0.0;
    if (N <= options.transport_budget && support <= options.transport_budget) {
      std::vector<double> cond_full(N, 0.0);
      for (std::size_t k = 0; k < part.size(); ++k) cond_full[part[k]] = d.cond[k];
      std::vector<double> xi(N, 1.0);
      for (std::size_t x = 0; x < N; ++x) {
        double lw = 0.0;
        for (std::size_t i = 0; i < n; ++i) lw += lf[s.offset(i) + s.symbol(x, i)];
        xi[x] = std::exp(lw);
      }
      const double total = stable_sum(xi);
      for (double& v : xi) v /= total;
      res.transport = dbar_exact(s, cond_full, xi, options.transport_budget).value;
      res.exact = true;
    } else {
      res.transport = std::sqrt(res.kl / (2.0 * dn));
      res.exact = false;
    }
  });

  std::vector<double> b_terms, c_terms, cor_kl_terms, cor_t_terms, rhs_terms;
  std::size_t t = 0;
  for (std::size_t p = 0; p < P.size(); ++p) {
    const PartData& d = data[p];
    const auto part = P.part(p);
    if (d.mass == 0.0) {
      ++r.null_parts;
      continue;
    }
    PartRecord rec;
    rec.id = p;
    rec.size = part.size();
    rec.mass = d.mass;
    rec.diameter = hyp.part_diameters[p];

    std::vector<double> kl_terms, tr_terms;
    std::size_t best = 0;
    for (std::size_t q = 0; q < d.rep_member.size(); ++q, ++t) {
      const PairResult& res = results[t];
      kl_terms.push_back(d.rep_weight[q] * res.kl);
      tr_terms.push_back(d.rep_weight[q] * res.transport);
      if (!res.exact) rec.transport_exact = false;
      // Representatives are in increasing member order. Values within
      // rounding of each other count as ties and keep the lowest index, so
      // the choice does not depend on how xi was normalised.
      const double key = options.transport ? res.transport : res.kl;
      const double best_key = options.transport ? results[t - q + best].transport
                                                : results[t - q + best].kl;
      if (key < best_key - kTieTolerance * (1.0 + best_key)) best = q;
    }
    const PairResult& sel = results[t - d.rep_member.size() + best];
    rec.kl_term = stable_sum(kl_terms);
    rec.transport_term = stable_sum(tr_terms);
    rec.selected = part[d.rep_member[best]];
    rec.selected_gradient = grad.row_values(rec.selected);
    rec.selected_kl = sel.kl;
    rec.selected_transport = sel.transport;

    // Double integral: sum_y w(y) g_y(y) - sum_x w(x) sum_{i,a} marg_i(a) g_{x,i}(a).
    std::vector<double> di;
    for (std::size_t k = 0; k < part.size(); ++k) {
      const std::size_t x = part[k];
      double diag = 0.0;
      for (std::size_t i = 0; i < n; ++i) diag += grad.at(x, s.offset(i) + s.symbol(x, i));
      double cross = 0.0;
      for (std::size_t c = 0; c < W; ++c) cross += d.marginals[c] * grad.at(x, c);
      di.push_back(d.cond[k] * diag);
      di.push_back(-d.cond[k] * cross);
    }
    rec.double_integral = stable_sum(di);

    if (!rec.transport_exact) r.transport_exact = false;
    b_terms.push_back(d.mass * rec.kl_term);
    c_terms.push_back(d.mass * rec.transport_term);
    cor_kl_terms.push_back(d.mass * rec.selected_kl);
    cor_t_terms.push_back(d.mass * rec.selected_transport);
    rhs_terms.push_back(d.mass * rec.double_integral);
    r.parts.push_back(std::move(rec));
  }

  const double H = r.partition_entropy;
  r.a_lhs = r.dtc;
  r.a_rhs = H + r.delta_eff * dn;
  r.b_lhs = stable_sum(b_terms);
  r.b_rhs = r.a_rhs;
  r.c_lhs = stable_sum(c_terms);
  r.c_rhs = std::sqrt(0.5 * (H / dn + r.delta_eff));
  r.a_holds = r.a_lhs <= r.a_rhs + options.slack;
  r.b_holds = r.b_lhs <= r.b_rhs + options.slack;
  r.c_holds = r.c_lhs <= r.c_rhs + options.slack;

  r.cor_kl_lhs = stable_sum(cor_kl_terms);
  r.cor_kl_rhs = (r.epsilon + r.delta_eff) * dn;
  r.cor_transport_lhs = stable_sum(cor_t_terms);
  r.cor_transport_rhs = std::sqrt(0.5 * (r.epsilon + r.delta_eff));
  r.cor_kl_holds = r.cor_kl_lhs <= r.cor_kl_rhs + options.slack;
  r.cor_transport_holds = r.cor_transport_lhs <= r.cor_transport_rhs + options.slack;

  r.identity_lhs = r.dtc + r.b_lhs;
  r.identity_rhs = H + stable_sum(rhs_terms);
  r.identity_residual = std::abs(r.identity_lhs - r.identity_rhs);
  r.identity_holds = r.identity_residual < 1e-8 * std::max(1.0, std::abs(r.identity_lhs));
  return r;
}

DecompositionReport theorem_a_terms(const Potential& f, const PartitionOfSpace& P,
                                    const DecomposeOptions& options) {
  return decompose(f, P, options);
}

DecompositionReport corollary_a_select(const Potential& f, const GradientCover& cover,
                                       const DecomposeOptions& options) {
  return decompose(f, cover.partition(), options);
}

double dem_identity_residual(const Potential& f, const PartitionOfSpace& P) {
  DecomposeOptions o;
  o.transport = false;
  return decompose(f, P, o).identity_residual;
}

}  // namespace gibbsdecomp
