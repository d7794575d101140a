#pragma once

// Slow, independent reference computations used only by the tests. None of
// these share code paths with the library beyond table lookups.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gibbsdecomp/potential.hpp"
#include "gibbsdecomp/space.hpp"

namespace oracle {

using gibbsdecomp::Distribution;
using gibbsdecomp::Potential;
using gibbsdecomp::ProductSpace;
using gibbsdecomp::SeparableFunction;

// sup_z |a(z) - b(z)| by visiting every configuration.
inline double brute_sup(const SeparableFunction& a, const SeparableFunction& b) {
  double best = 0.0;
  for (std::size_t z = 0; z < a.space().state_count(); ++z)
    best = std::max(best, std::abs(a(z) - b(z)));
  return best;
}

// Partial derivative straight from the table.
inline double partial(const Potential& f, std::size_t x, std::size_t i, std::size_t s) {
  const ProductSpace& sp = f.space();
  return f(sp.with_symbol(x, i, s)) - f(sp.with_symbol(x, i, sp.reference_point(i)));
}

// sup_z |grad f(x,z) - grad f(y,z)| by enumerating z.
inline double gradient_distance(const Potential& f, std::size_t x, std::size_t y) {
  const ProductSpace& sp = f.space();
  double best = 0.0;
  for (std::size_t z = 0; z < sp.state_count(); ++z) {
    double d = 0.0;
    for (std::size_t i = 0; i < sp.dims(); ++i) {
      const std::size_t s = sp.symbol(z, i);
      d += partial(f, x, i, s) - partial(f, y, i, s);
    }
    best = std::max(best, std::abs(d));
  }
  return best;
}

inline double hamming(const ProductSpace& sp, std::size_t x, std::size_t y) {
  double d = 0.0;
  for (std::size_t i = 0; i < sp.dims(); ++i) d += sp.metric(i, sp.symbol(x, i), sp.symbol(y, i));
  return d / static_cast<double>(sp.dims());
}

// Sup over all distinct pairs of num(x, y) / d_n(x, y).
inline double pair_lipschitz(const ProductSpace& sp,
                             const std::function<double(std::size_t, std::size_t)>& num) {
  double best = 0.0;
  for (std::size_t x = 0; x < sp.state_count(); ++x)
    for (std::size_t y = x + 1; y < sp.state_count(); ++y) {
      const double d = hamming(sp, x, y);
      const double v = num(x, y);
      if (d == 0.0) {
        if (v != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      best = std::max(best, v / d);
    }
  return best;
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

// DTC through sum_i H(x_{-i}) - (n - 1) H(x), an identity independent of
// the conditional-entropy definition used by the library.
inline double dtc_by_marginals(const Distribution& mu) {
  const ProductSpace& sp = mu.space();
  const std::size_t n = sp.dims();
  const double hx = entropy(std::vector<double>(mu.weights().begin(), mu.weights().end()));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t others = sp.state_count() / sp.radix(i);
    std::vector<double> m(others, 0.0);
    for (std::size_t x = 0; x < sp.state_count(); ++x) {
      // Drop coordinate i from the mixed-radix index.
      const std::size_t hi = x / (sp.stride(i) * sp.radix(i));
      const std::size_t lo = x % sp.stride(i);
      m[hi * sp.stride(i) + lo] += mu[x];
    }
    sum += entropy(m);
  }
  return sum - static_cast<double>(n - 1) * hx;
}

// Optimal transport by enumerating every vertex of the transportation
// polytope: bases are spanning trees of the complete bipartite graph on
// m + k nodes. Practical for m, k <= 4.
inline double transport_by_vertices(const std::vector<double>& p, const std::vector<double>& q,
                                    const std::vector<std::vector<double>>& cost) {
  const std::size_t m = p.size(), k = q.size(), cells = m * k, need = m + k - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(cells, 0);
  std::fill(pick.end() - static_cast<long>(need), pick.end(), 1);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);
    // Peel leaves: a row or column touching exactly one open cell fixes it.
    std::vector<double> rows(p), cols(q), flow(cells, 0.0);
    std::vector<char> open(cells, 0);
    for (std::size_t c : chosen) open[c] = 1;
    std::size_t remaining = chosen.size();
    bool progress = true;
    while (remaining && progress) {
      progress = false;
      for (std::size_t r = 0; r < m + k && remaining; ++r) {
        std::size_t deg = 0, last = 0;
        for (std::size_t c : chosen) {
          if (!open[c]) continue;
          const bool touches = r < m ? c / k == r : c % k == r - m;
          if (touches) {
            ++deg;
            last = c;
          }
        }
        if (deg != 1) continue;
        const double v = r < m ? rows[r] : cols[r - m];
        flow[last] = v;
        rows[last / k] -= v;
        cols[last % k] -= v;
        open[last] = 0;
        --remaining;
        progress = true;
      }
    }
    if (remaining) continue;  // contains a cycle: not a basis
    bool ok = true;
    for (double r : rows) ok = ok && std::abs(r) < 1e-12;
    for (double c : cols) ok = ok && std::abs(c) < 1e-12;
    for (std::size_t c : chosen) ok = ok && flow[c] >= -1e-12;
    if (!ok) continue;
    double total = 0.0;
    for (std::size_t c : chosen) total += flow[c] * cost[c / k][c % k];
    best = std::min(best, total);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

// Root of g on [lo, hi] given a sign change, to machine precision.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Largest root of m = tanh(a m + h) in [0, 1] for h >= 0.
inline double tanh_root(double a, double h) {
  auto g = [&](double m) { return m - std::tanh(a * m + h); };
  if (h == 0.0 && a <= 1.0) return 0.0;
  return bisect(g, h == 0.0 ? 1e-9 : 0.0, 1.0);
}

// Max of g on [lo, hi]: grid of `steps` points, then golden-section refine
// around the best grid point.
inline double grid_max(const std::function<double(double)>& g, double lo, double hi,
                       int steps = 20000) {
  double best_x = lo, best = g(lo);
  for (int s = 1; s <= steps; ++s) {
    const double x = lo + (hi - lo) * s / steps;
    const double v = g(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / steps), b = std::min(hi, best_x + (hi - lo) / steps);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (g(c) > g(d)) b = d;
    else a = c;
  }
  return std::max(best, g(0.5 * (a + b)));
}

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

// log of the Curie-Weiss partition function against uniform lambda, summed
// over magnetisation classes.
inline double curie_weiss_log_z(std::size_t n, double beta, double h) {
  std::vector<double> terms;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = 2.0 * double(k) - double(n);
    const double logc = std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) -
                        std::lgamma(double(n - k) + 1);
    terms.push_back(logc - double(n) * std::log(2.0) + beta / (2.0 * double(n)) * s * s + h * s);
  }
  const double mx = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - mx);
  return mx + std::log(acc);
}

// Mean-field value of Curie-Weiss over symmetric product measures with mean
// m: n [beta (n-1)/(2n) m^2 + h m + H2((1+m)/2) - log 2] + beta / 2.
inline double curie_weiss_mean_field(std::size_t n, double beta, double h) {
  const double dn = double(n);
  auto g = [&](double m) {
    return dn * (beta * (dn - 1) / (2 * dn) * m * m + h * m + binary_entropy((1 + m) / 2) -
                 std::log(2.0)) +
           beta / 2;
  };
  return grid_max(g, -1.0, 1.0);
}

}  // namespace oracle
