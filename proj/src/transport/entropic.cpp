// Log-domain Sinkhorn with epsilon scaling, followed by the rounding step of
// Altschuler, Weed and Rigollet (2017) which turns the approximate plan into
// an exact coupling. The returned cost is that of a feasible coupling, hence
// an upper bound on the transport distance.

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/transport.hpp"

namespace gibbsdecomp {

namespace {

double lse_row(const double* v, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, v[k]);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(v[k] - m);
  return m + std::log(s);
}

}  // namespace

EntropicResult dbar_entropic(const Distribution& mu, const Distribution& nu, double reg,
                             std::size_t max_iter) {
  if (!mu.space().same_shape(nu.space())) {
    throw ConfigError("dbar_entropic: distributions live on different spaces");
  }
  const ProductSpace& space = mu.space();
  std::vector<std::size_t> S, T;
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (mu[x] > 0.0) S.push_back(x);
  for (std::size_t y = 0; y < nu.size(); ++y)
    if (nu[y] > 0.0) T.push_back(y);
  const std::size_t m = S.size(), k = T.size();

  std::vector<double> C(m * k);
  std::vector<double> nonzero;
  double cmax = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double d = space.distance(S[a], T[b]);
      C[a * k + b] = d;
      cmax = std::max(cmax, d);
      if (d > 0.0) nonzero.push_back(d);
    }
  }
  EntropicResult r;
  if (reg <= 0.0) {
    if (nonzero.empty()) {
      reg = 1e-2;
    } else {
      auto mid = nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2);
      std::nth_element(nonzero.begin(), mid, nonzero.end());
      double med = *mid;
      if (nonzero.size() % 2 == 0) {
        med = 0.5 * (med + *std::max_element(nonzero.begin(), mid));
      }
      reg = 1e-2 * med;
    }
  }
  r.reg = reg;

  std::vector<double> loga(m), logb(k);
  for (std::size_t a = 0; a < m; ++a) loga[a] = std::log(mu[S[a]]);
  for (std::size_t b = 0; b < k; ++b) logb[b] = std::log(nu[T[b]]);

  std::vector<double> f(m, 0.0), g(k, 0.0), buf(std::max(m, k));
  std::vector<double> P(m * k);
  auto sweep = [&](double eps) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < k; ++b) buf[b] = (g[b] - C[a * k + b]) / eps;
      f[a] = eps * (loga[a] - lse_row(buf.data(), k));
    }
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t a = 0; a < m; ++a) buf[a] = (f[a] - C[a * k + b]) / eps;
      g[b] = eps * (logb[b] - lse_row(buf.data(), m));
    }
  };
  // Columns are exact after the g update; report the row violation (L1).
  auto violation = [&](double eps) {
    double v = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < k; ++b) row += std::exp((f[a] + g[b] - C[a * k + b]) / eps);
      v += std::abs(row - mu[S[a]]);
    }
    return v;
  };

  constexpr double kTol = 1e-8;
  double eps = std::max(reg, cmax);
  std::size_t iter = 0;
  double viol = std::numeric_limits<double>::infinity();
  while (true) {
    const bool last = eps <= reg;
    const double stage_tol = last ? kTol : 1e-4;
    while (iter < max_iter) {
      sweep(eps);
      ++iter;
      if (iter % 5 == 0 || iter == max_iter) {
        viol = violation(eps);
        if (viol < stage_tol) break;
      }
    }
    if (iter >= max_iter && !(viol < stage_tol)) {
      throw NonConvergence("dbar_entropic: marginal violation above 1e-8 after max_iter sweeps",
                           viol);
    }
    if (last) break;
    eps = std::max(reg, 0.5 * eps);
  }
  r.iterations = iter;
  r.violation = viol;

  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < k; ++b)
      P[a * k + b] = std::exp((f[a] + g[b] - C[a * k + b]) / eps);

  // Rounding onto the transportation polytope.
  for (std::size_t a = 0; a < m; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < k; ++b) row += P[a * k + b];
    const double s = row > 0.0 ? std::min(1.0, mu[S[a]] / row) : 1.0;
    for (std::size_t b = 0; b < k; ++b) P[a * k + b] *= s;
  }
  for (std::size_t b = 0; b < k; ++b) {
    double col = 0.0;
    for (std::size_t a = 0; a < m; ++a) col += P[a * k + b];
    const double s = col > 0.0 ? std::min(1.0, nu[T[b]] / col) : 1.0;
    for (std::size_t a = 0; a < m; ++a) P[a * k + b] *= s;
  }
  std::vector<double> er(m), ec(k);
  double er_total = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < k; ++b) row += P[a * k + b];
    er[a] = std::max(0.0, mu[S[a]] - row);
    er_total += er[a];
  }
  for (std::size_t b = 0; b < k; ++b) {
    double col = 0.0;
    for (std::size_t a = 0; a < m; ++a) col += P[a * k + b];
    ec[b] = std::max(0.0, nu[T[b]] - col);
  }
  if (er_total > 0.0) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < k; ++b) P[a * k + b] += er[a] * ec[b] / er_total;
  }

  std::vector<double> terms;
  std::vector<double> rows(mu.size(), 0.0), cols(nu.size(), 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double p = P[a * k + b];
      if (p <= 0.0) continue;
      r.plan.coupling.push_back({S[a], T[b], p});
      terms.push_back(p * C[a * k + b]);
      rows[S[a]] += p;
      cols[T[b]] += p;
    }
  }
  r.plan.cost = stable_sum(terms);
  double err = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) err = std::max(err, std::abs(rows[x] - mu[x]));
  for (std::size_t y = 0; y < nu.size(); ++y) err = std::max(err, std::abs(cols[y] - nu[y]));
  r.plan.marginal_error = err;
  r.value = r.plan.cost;
  return r;
}

}  // namespace gibbsdecomp
