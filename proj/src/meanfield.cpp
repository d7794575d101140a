#include "gibbsdecomp/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/kernels.hpp"
#include "gibbsdecomp/models.hpp"
#include "gibbsdecomp/parallel.hpp"

namespace gibbsdecomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInf : 0.0;
}

double sup_diff(const GradientMap& grad, std::size_t x, std::size_t y) {
  const ProductSpace& s = grad.space();
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < s.dims(); ++i) {
    const std::size_t o = s.offset(i);
    double hi = grad.at(x, o) - grad.at(y, o);
    double lo = hi;
    for (std::size_t a = 1; a < s.radix(i); ++a) {
      const double d = grad.at(x, o + a) - grad.at(y, o + a);
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    pos += hi;
    neg += lo;
  }
  return std::max(pos, -neg);
}

// Generic Lipschitz sup of a map with distance `num(x, y)` over d_n.
template <class Num>
LipschitzEstimate lipschitz(const ProductSpace& s, std::size_t pair_budget, Num num) {
  LipschitzEstimate est;
  const std::size_t N = s.state_count();
  const std::size_t n = s.dims();
  const bool all_pairs = N < 2 || (N - 1) <= pair_budget / std::max<std::size_t>(1, N / 2);
  if (all_pairs) {
    est.regime = "pairs";
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = x + 1; y < N; ++y)
        est.value = std::max(est.value, ratio(num(x, y), s.distance(x, y)));
  } else {
    est.regime = "adjacent";
    for (std::size_t x = 0; x < N; ++x) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = s.symbol(x, i);
        for (std::size_t b = a + 1; b < s.radix(i); ++b) {
          const std::size_t y = s.with_symbol(x, i, b);
          est.value = std::max(est.value,
                               ratio(num(x, y), s.metric(i, a, b) / static_cast<double>(n)));
        }
      }
    }
  }
  est.exact = true;
  return est;
}

std::vector<double> normalize_factors(const ProductSpace& s, std::vector<double> factors) {
  if (factors.size() != s.symbol_total()) {
    throw ConfigError("product factors: wrong number of entries");
  }
  for (std::size_t i = 0; i < s.dims(); ++i) {
    double t = 0.0;
    for (std::size_t a = 0; a < s.radix(i); ++a) {
      const double v = factors[s.offset(i) + a];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError("product factors: entries must be nonnegative");
      }
      t += v;
    }
    if (!(t > 0.0)) throw ConfigError("product factors: a coordinate has zero mass");
    for (std::size_t a = 0; a < s.radix(i); ++a) factors[s.offset(i) + a] /= t;
  }
  return factors;
}

}  // namespace

LipschitzEstimate gradient_lipschitz(const GradientMap& grad, std::size_t pair_budget) {
  return lipschitz(grad.space(), pair_budget,
                   [&](std::size_t x, std::size_t y) { return sup_diff(grad, x, y); });
}

LipschitzEstimate gradient_lipschitz(const Potential& f, std::size_t pair_budget) {
  return gradient_lipschitz(GradientMap(f), pair_budget);
}

LipschitzEstimate potential_lipschitz(const Potential& f, std::size_t pair_budget) {
  return lipschitz(f.space(), pair_budget,
                   [&](std::size_t x, std::size_t y) { return std::abs(f(x) - f(y)); });
}

// ---------------------------------------------------------------------------

std::vector<double> conditional_expectation(const Potential& f,
                                            std::span<const double> factors,
                                            std::size_t coord) {
  const ProductSpace& s = f.space();
  if (coord >= s.dims()) throw ConfigError("conditional_expectation: bad coordinate");
  std::vector<double> cur(f.values().begin(), f.values().end());
  std::size_t size = cur.size();
  // Trailing axes first (they are contiguous), then leading axes.
  for (std::size_t j = s.dims(); j-- > coord + 1;) {
    const std::size_t k = s.radix(j);
    const double* xi = factors.data() + s.offset(j);
    const std::size_t out = size / k;
    for (std::size_t y = 0; y < out; ++y) {
      double acc = 0.0;
      for (std::size_t a = 0; a < k; ++a) acc += cur[y * k + a] * xi[a];
      cur[y] = acc;
    }
    size = out;
  }
  for (std::size_t j = 0; j < coord; ++j) {
    const std::size_t k = s.radix(j);
    const double* xi = factors.data() + s.offset(j);
    const std::size_t rest = size / k;
    for (std::size_t y = 0; y < rest; ++y) {
      double acc = 0.0;
      for (std::size_t a = 0; a < k; ++a) acc += xi[a] * cur[a * rest + y];
      cur[y] = acc;
    }
    size = rest;
  }
  cur.resize(size);
  return cur;
}

double expectation(const Potential& f, std::span<const double> factors) {
  const ProductSpace& s = f.space();
  if (s.dims() == 0) return f(0);
  const auto e = conditional_expectation(f, factors, 0);
  double acc = 0.0;
  for (std::size_t a = 0; a < e.size(); ++a) acc += factors[a] * e[a];
  return acc;
}

double mean_field_objective(const Potential& f, const ProductMeasure& xi) {
  return expectation(f, xi.factors()) - kl(xi, ProductMeasure::reference(f.space_ptr()));
}

// ---------------------------------------------------------------------------

FixedPointRecord fixed_point_residuals(const Potential& f, const DecompositionReport& report,
                                       std::size_t pair_budget) {
  const ProductSpace& s = f.space();
  const GradientMap grad(f);
  const LipschitzEstimate L = gradient_lipschitz(grad, pair_budget);
  FixedPointRecord rec;
  rec.lipschitz = L.value;
  rec.lipschitz_exact = L.exact;
  std::vector<double> terms;
  for (const PartRecord& part : report.parts) {
    const SeparableFunction g(f.space_ptr(), part.selected_gradient);
    const std::vector<double> w = product_gibbs(g).joint_weights();
    std::vector<double> avg(grad.width());
    for (std::size_t c = 0; c < grad.width(); ++c) {
      avg[c] = kernels::active().dot(w.data(), grad.column(c).data(), w.size());
    }
    const double res = sep_sup_norm(g, SeparableFunction(f.space_ptr(), avg));
    rec.residuals.push_back(res);
    terms.push_back(part.mass * res);
  }
  const double dn = static_cast<double>(s.dims());
  rec.weighted_sum = stable_sum(terms);
  rec.bound = report.delta_eff * dn +
              L.value * std::sqrt(0.5 * (report.partition_entropy / dn + report.delta_eff));
  rec.holds = rec.weighted_sum <= rec.bound + 1e-8;
  return rec;
}

// ---------------------------------------------------------------------------

std::vector<double> spin_field(const Potential& f, std::span<const double> m) {
  const ProductSpace& s = f.space();
  if (m.size() != s.dims()) throw ConfigError("spin_field: m must have one entry per coordinate");
  std::vector<double> factors(2 * s.dims());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    factors[2 * i] = 0.5 * (1.0 - m[i]);
    factors[2 * i + 1] = 0.5 * (1.0 + m[i]);
  }
  std::vector<double> v(s.dims());
  for (std::size_t i = 0; i < s.dims(); ++i) {
    const auto e = conditional_expectation(f, factors, i);
    v[i] = 0.5 * (e[1] - e[0]);
  }
  return v;
}

TanhResult tanh_fixed_point(const Potential& f, std::vector<double> m0, double tol,
                            std::size_t max_iter, double damping) {
  const ProductSpace& s = f.space();
  if (!s.is_binary() || !s.has_uniform_reference()) {
    throw ConfigError("tanh_fixed_point: requires binary alphabets with uniform lambda");
  }
  if (m0.size() != s.dims()) {
    throw ConfigError("tanh_fixed_point: m0 must have one entry per coordinate");
  }
  for (double v : m0)
    if (!(v >= -1.0 && v <= 1.0)) throw ConfigError("tanh_fixed_point: m0 must lie in [-1,1]");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw ConfigError("tanh_fixed_point: damping must lie in (0,1]");
  }
  TanhResult r;
  r.m = std::move(m0);
  r.trajectory.push_back(r.m);
  std::vector<double> t(s.dims());
  while (true) {
    const auto v = spin_field(f, r.m);
    double res = 0.0;
    for (std::size_t i = 0; i < s.dims(); ++i) {
      t[i] = std::tanh(v[i]);
      res = std::max(res, std::abs(t[i] - r.m[i]));
    }
    r.residual = res;
    if (res < tol) return r;
    if (r.iterations == max_iter) {
      std::ostringstream os;
      os << "tanh_fixed_point: residual " << res << " after " << max_iter << " iterations";
      throw NonConvergence(os.str(), res, std::move(r.trajectory));
    }
    for (std::size_t i = 0; i < s.dims(); ++i) {
      r.m[i] = (1.0 - damping) * r.m[i] + damping * t[i];
    }
    ++r.iterations;
    r.trajectory.push_back(r.m);
  }
}

// ---------------------------------------------------------------------------

AscentResult coordinate_ascent(const Potential& f, std::vector<double> start, double tol,
                               std::size_t max_sweeps) {
  const ProductSpace& s = f.space();
  AscentResult r;
  r.factors = normalize_factors(s, std::move(start));
  std::vector<double> logits(s.symbol_total());
  for (std::size_t i = 0; i < s.dims(); ++i)
    for (std::size_t a = 0; a < s.radix(i); ++a)
      logits[s.offset(i) + a] = std::log(r.factors[s.offset(i) + a]);
  while (r.sweeps < max_sweeps) {
    double change = 0.0;
    for (std::size_t i = 0; i < s.dims(); ++i) {
      const auto e = conditional_expectation(f, r.factors, i);
      auto ll = s.log_reference_measure(i);
      std::span<double> seg(logits.data() + s.offset(i), s.radix(i));
      for (std::size_t a = 0; a < seg.size(); ++a) seg[a] = e[a] + ll[a];
      const double lse = log_sum_exp(seg);
      for (std::size_t a = 0; a < seg.size(); ++a) {
        seg[a] -= lse;
        const double p = std::exp(seg[a]);
        change = std::max(change, std::abs(p - r.factors[s.offset(i) + a]));
        r.factors[s.offset(i) + a] = p;
      }
    }
    ++r.sweeps;
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  r.value = mean_field_objective(f, ProductMeasure::from_log_weights(f.space_ptr(), logits));
  return r;
}

PartitionBoundRecord partition_function_bound(const Potential& f, const GradientCover& cover,
                                              const MeanFieldOptions& options) {
  const ProductSpace& s = f.space();
  const std::size_t N = s.state_count();
  const double dn = static_cast<double>(s.dims());
  const GibbsMeasure mu = gibbs(f);
  const GradientMap grad(f);

  PartitionBoundRecord rec;
  rec.log_z_exact = mu.log_z;

  // Score the gradient products. The bound's proof averages the objective
  // over xi_{grad f(y,.)} under mu, so the best of them already closes it.
  std::size_t mode = 0;
  for (std::size_t x = 1; x < N; ++x)
    if (mu.log_weights[x] > mu.log_weights[mode]) mode = x;
  std::vector<std::size_t> candidates;
  {
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t x = 0; x < N; ++x) {
      if (seen.try_emplace(grad.row_values(x), x).second) candidates.push_back(x);
    }
    if (candidates.size() > options.candidate_budget / std::max<std::size_t>(1, N)) {
      candidates.assign(1, mode);
    }
  }
  std::vector<double> cand_values(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t q) {
    cand_values[q] = mean_field_objective(f, gradient_product(grad, candidates[q]));
  });
  std::size_t best_cand = 0;
  for (std::size_t q = 1; q < candidates.size(); ++q)
    if (cand_values[q] > cand_values[best_cand]) best_cand = q;
  rec.gradient_candidates = candidates.size();
  rec.gradient_candidate_value = cand_values[best_cand];

  // Starting points: random restarts, the gradient at the mode, and the best
  // gradient product.
  std::vector<std::vector<double>> starts;
  std::vector<std::string> origins;
  std::mt19937_64 rng(options.seed);
  for (std::size_t k = 0; k < options.restarts; ++k) {
    std::vector<double> st(s.symbol_total());
    for (double& v : st) v = 1e-3 + uniform01(rng);
    starts.push_back(std::move(st));
    origins.push_back("random restart " + std::to_string(k));
  }
  {
    const auto pm = gradient_product(grad, mode);
    starts.emplace_back(pm.factors().begin(), pm.factors().end());
    origins.push_back("gradient at mode " + std::to_string(mode));
  }
  if (candidates[best_cand] != mode) {
    const auto pm = gradient_product(grad, candidates[best_cand]);
    starts.emplace_back(pm.factors().begin(), pm.factors().end());
    origins.push_back("gradient at " + std::to_string(candidates[best_cand]));
  }
  std::vector<AscentResult> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) { runs[k] = coordinate_ascent(f, starts[k]); });

  std::size_t best = 0;
  double lo = runs[0].value;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    rec.restart_values.push_back(runs[k].value);
    lo = std::min(lo, runs[k].value);
    if (runs[k].value > runs[best].value) best = k;
  }
  rec.mean_field_estimate = runs[best].value;
  rec.estimate_origin = origins[best];
  rec.best_factors = runs[best].factors;
  rec.converged = runs[best].converged;
  rec.restart_spread = runs[best].value - lo;
  rec.restarts_disagree = rec.restart_spread > 1e-6;

  const HypothesisCheck hyp = verify_partition_hypothesis(grad, cover.partition(),
                                                          options.pair_budget);
  const LipschitzEstimate L = potential_lipschitz(f, options.pair_budget);
  rec.epsilon = covering_exponent(cover);
  rec.delta_eff = hyp.delta_eff;
  rec.part_count = cover.part_count();
  rec.lipschitz_f = L.value;
  rec.lipschitz_exact = L.exact;
  const double ed = rec.epsilon + rec.delta_eff;
  rec.bound_rhs = rec.mean_field_estimate + ed * dn + std::sqrt(0.5 * ed) * L.value;
  rec.slack = rec.bound_rhs - rec.log_z_exact;
  rec.holds = rec.slack >= -1e-8;
  return rec;
}

FiniteUniformRecord finite_uniform_form(const Potential& f, const PartitionBoundRecord& record) {
  const ProductSpace& s = f.space();
  if (!s.has_uniform_reference()) {
    throw ConfigError("finite_uniform_form: requires uniform reference measures");
  }
  FiniteUniformRecord out;
  double logk = 0.0;
  for (std::size_t i = 0; i < s.dims(); ++i) logk += std::log(static_cast<double>(s.radix(i)));
  out.log_alphabet_total = logk;
  out.log_sum = log_sum_exp(f.values());

  // H(xi) + int f dxi at the recorded maximizer, from scratch.
  const auto& fac = record.best_factors;
  double h = 0.0;
  for (double p : fac)
    if (p > 0.0) h -= p * std::log(p);
  const double lambda_form =
      mean_field_objective(f, ProductMeasure(f.space_ptr(), fac));
  out.entropy_estimate = h + expectation(f, fac);

  const double slack_terms = record.bound_rhs - record.mean_field_estimate;
  out.bound_rhs = out.entropy_estimate + slack_terms;
  out.slack = out.bound_rhs - out.log_sum;
  out.residual = std::max(std::abs((out.log_sum - record.log_z_exact) - logk),
                          std::abs((out.entropy_estimate - lambda_form) - logk));
  return out;
}

}  // namespace gibbsdecomp
