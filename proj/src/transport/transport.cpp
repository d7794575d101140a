#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/transport.hpp"

namespace gibbsdecomp {

namespace {

std::vector<std::size_t> support(std::span<const double> w) {
  std::vector<std::size_t> s;
  for (std::size_t x = 0; x < w.size(); ++x)
    if (w[x] > 0.0) s.push_back(x);
  return s;
}

void finish_plan(TransportPlan& plan, const ProductSpace& space,
                 std::span<const double> mu, std::span<const double> nu) {
  std::sort(plan.coupling.begin(), plan.coupling.end(),
            [](const TransportEntry& a, const TransportEntry& b) {
              return a.source != b.source ? a.source < b.source : a.target < b.target;
            });
  std::vector<double> rows(mu.size(), 0.0), cols(nu.size(), 0.0);
  std::vector<double> terms;
  terms.reserve(plan.coupling.size());
  for (const auto& e : plan.coupling) {
    rows[e.source] += e.mass;
    cols[e.target] += e.mass;
    terms.push_back(e.mass * space.distance(e.source, e.target));
  }
  plan.cost = stable_sum(terms);
  double err = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) err = std::max(err, std::abs(rows[x] - mu[x]));
  for (std::size_t y = 0; y < nu.size(); ++y) err = std::max(err, std::abs(cols[y] - nu[y]));
  plan.marginal_error = err;
}

}  // namespace

DbarResult dbar_exact(const ProductSpace& space, std::span<const double> mu,
                      std::span<const double> nu, std::size_t support_budget) {
  if (mu.size() != space.state_count() || nu.size() != space.state_count()) {
    throw ConfigError("dbar_exact: weight vectors do not match the space");
  }
  const auto S = support(mu);
  const auto T = support(nu);
  if (S.empty() || T.empty()) throw ConfigError("dbar_exact: empty support");
  if (S.size() > support_budget || T.size() > support_budget) {
    std::ostringstream os;
    os << "dbar_exact: supports of size " << S.size() << " and " << T.size()
       << " exceed the transport budget " << support_budget
       << "; use dbar_entropic or raise the budget";
    throw BudgetExceeded(os.str());
  }

  DbarResult r;
  TransportPlan& plan = r.plan;
  if (S.size() == 1 || T.size() == 1) {
    // The only coupling is the product one.
    for (std::size_t x : S)
      for (std::size_t y : T) plan.coupling.push_back({x, y, S.size() == 1 ? nu[y] : mu[x]});
    finish_plan(plan, space, mu, nu);
    r.value = plan.cost;
    plan.dual_value = plan.cost;
    return r;
  }

  const std::size_t m = S.size(), k = T.size(), n = space.dims();
  std::vector<std::size_t> sym_s(m * n), sym_t(k * n);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < n; ++i) sym_s[a * n + i] = space.symbol(S[a], i);
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t i = 0; i < n; ++i) sym_t[b * n + i] = space.symbol(T[b], i);

  std::vector<std::int64_t> cint(m * k);
  double rounding = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += space.metric(i, sym_s[a * n + i], sym_t[b * n + i]);
      d /= static_cast<double>(n);
      cint[a * k + b] = std::llround(d * kCostScale);
      rounding = std::max(rounding, std::abs(d - double(cint[a * k + b]) / kCostScale));
    }
  }
  std::vector<double> a_w(m), b_w(k);
  for (std::size_t a = 0; a < m; ++a) a_w[a] = mu[S[a]];
  for (std::size_t b = 0; b < k; ++b) b_w[b] = nu[T[b]];

  const auto sol = transport::network_simplex(a_w, b_w, cint);
  std::vector<double> primal_int;
  for (std::size_t e = 0; e < sol.flows.size(); ++e) {
    plan.coupling.push_back({S[sol.rows[e]], T[sol.cols[e]], sol.flows[e]});
    primal_int.push_back(sol.flows[e] * double(cint[sol.rows[e] * k + sol.cols[e]]));
  }
  finish_plan(plan, space, mu, nu);

  // Duals are shifted so the smallest u is zero before pairing with the
  // weights; the shift is harmless for balanced marginals and keeps the
  // dual objective free of large cancelling terms.
  const double shift = *std::min_element(sol.u.begin(), sol.u.end());
  std::vector<double> dual;
  for (std::size_t a = 0; a < m; ++a) dual.push_back(a_w[a] * (sol.u[a] - shift));
  for (std::size_t b = 0; b < k; ++b) dual.push_back(b_w[b] * (sol.v[b] + shift));
  plan.dual_value = stable_sum(dual) / kCostScale;
  plan.duality_gap = stable_sum(primal_int) / kCostScale - plan.dual_value;
  plan.min_reduced_cost = double(sol.min_reduced_cost) / kCostScale;
  plan.rounding_bound = 2.0 * rounding;
  plan.pivots = sol.pivots;
  r.value = plan.cost;
  return r;
}

DbarResult dbar_exact(const Distribution& mu, const Distribution& nu,
                      std::size_t support_budget) {
  if (!mu.space().same_shape(nu.space())) {
    throw ConfigError("dbar_exact: distributions live on different spaces");
  }
  return dbar_exact(mu.space(), mu.weights(), nu.weights(), support_budget);
}

double marton_bound(const Distribution& mu, const ProductMeasure& xi) {
  const double d = kl(mu, xi);
  if (!std::isfinite(d)) return d;
  return std::sqrt(d / (2.0 * static_cast<double>(mu.space().dims())));
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  out << "source,target,mass\n";
  char buf[64];
  for (const auto& e : plan.coupling) {
    std::snprintf(buf, sizeof buf, "%.17g", e.mass);
    out << e.source << ',' << e.target << ',' << buf << '\n';
  }
}

}  // namespace gibbsdecomp
