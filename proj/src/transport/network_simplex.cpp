// Primal network simplex for the transportation problem.
//
// Graph: m source nodes, k sink nodes, one artificial root. Real arcs
// i -> m+j for every pair (never stored explicitly: arc a is (a / k, a % k)).
// The starting basis is the artificial star: sources drain into the root at
// cost 0, the root feeds sinks at a prohibitive cost, so any optimal basis
// carries no artificial flow. Pivots use block pricing and the strongly
// feasible leaving-arc rule, which rules out cycling. A pivot pushes flow
// around the cycle and re-hangs the cut-off subtree; every few hundred
// pivots, and before the answer is read, the tree is rebuilt from the root
// and the basic flows are recomputed from the supplies, so drift stays
// bounded and the final flows are exact sums of supplies.

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/transport.hpp"

namespace gibbsdecomp::transport {

namespace {

class Solver {
 public:
  Solver(std::span<const double> supply, std::span<const double> demand,
         std::span<const std::int64_t> cost)
      : m_(supply.size()), k_(demand.size()), nodes_(m_ + k_), root_(nodes_),
        real_arcs_(m_ * k_), cost_(cost) {
    std::int64_t max_cost = 0;
    for (std::int64_t c : cost_) {
      if (c < 0) throw ConfigError("network simplex: costs must be nonnegative");
      max_cost = std::max(max_cost, c);
    }
    art_cost_ = (max_cost + 1) * static_cast<std::int64_t>(nodes_ + 1);

    supply_.resize(nodes_ + 1, 0.0);
    for (std::size_t i = 0; i < m_; ++i) supply_[i] = supply[i];
    for (std::size_t j = 0; j < k_; ++j) supply_[m_ + j] = -demand[j];

    slot_arc_.resize(nodes_);
    slot_flow_.resize(nodes_);
    slot_of_.assign(real_arcs_ + nodes_, kNone);
    adj_.resize(nodes_ + 1);
    for (std::size_t u = 0; u < nodes_; ++u) {
      slot_arc_[u] = real_arcs_ + u;
      slot_of_[real_arcs_ + u] = u;
      adj_[u].push_back(real_arcs_ + u);
      adj_[root_].push_back(real_arcs_ + u);
    }
    parent_.resize(nodes_ + 1);
    pred_.resize(nodes_ + 1);
    up_.resize(nodes_ + 1);
    depth_.resize(nodes_ + 1);
    pi_.resize(nodes_ + 1);
    order_.reserve(nodes_ + 1);
    sub_.resize(nodes_ + 1);
    rebuild();
  }

  SimplexSolution run() {
    const std::size_t block =
        std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(double(real_arcs_))));
    const std::size_t pivot_cap = 64 * (real_arcs_ + nodes_) + 100000;
    const std::size_t refresh = std::max<std::size_t>(256, nodes_);
    std::size_t next = 0;
    std::size_t pivots = 0;
    while (true) {
      // Block search: scan up to `block` arcs at a time, starting where the
      // previous search stopped, and take the most negative one seen.
      std::size_t entering = kNone;
      std::int64_t best = 0;
      std::size_t scanned = 0, in_block = 0;
      std::size_t a = next, i = next / k_, j = next % k_;
      while (scanned < real_arcs_) {
        const std::int64_t rc = cost_[a] + pi_[i] - pi_[m_ + j];
        if (rc < best) {
          best = rc;
          entering = a;
        }
        ++scanned;
        ++in_block;
        ++a;
        if (++j == k_) {
          j = 0;
          if (++i == m_) i = a = 0;
        }
        if (in_block == block) {
          if (entering != kNone) break;
          in_block = 0;
        }
      }
      if (entering == kNone) {
        // Confirm optimality on freshly derived flows and potentials.
        if (dirty_) {
          rebuild();
          continue;
        }
        break;
      }
      next = a;
      pivot(entering);
      if (++pivots % refresh == 0) rebuild();
      if (pivots > pivot_cap) {
        throw NonConvergence("network simplex: pivot limit reached", double(pivots));
      }
    }
    return solution(pivots);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t src(std::size_t a) const {
    if (a < real_arcs_) return a / k_;
    const std::size_t u = a - real_arcs_;
    return u < m_ ? u : root_;
  }
  std::size_t dst(std::size_t a) const {
    if (a < real_arcs_) return m_ + a % k_;
    const std::size_t u = a - real_arcs_;
    return u < m_ ? root_ : u;
  }
  std::int64_t arc_cost(std::size_t a) const {
    if (a < real_arcs_) return cost_[a];
    return (a - real_arcs_) < m_ ? 0 : art_cost_;
  }
  std::int64_t reduced_cost(std::size_t a) const {
    return cost_[a] + pi_[a / k_] - pi_[m_ + a % k_];
  }
  double& flow(std::size_t u) { return slot_flow_[slot_of_[pred_[u]]]; }
  double flow(std::size_t u) const { return slot_flow_[slot_of_[pred_[u]]]; }

  void pivot(std::size_t entering) {
    const std::size_t first = src(entering);
    const std::size_t second = dst(entering);
    std::size_t u = first, v = second;
    while (u != v) {
      if (depth_[u] >= depth_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    const std::size_t join = u;

    // Pushing flow along entering reduces up-arcs on the source side and
    // down-arcs on the target side; the last blocking arc met when walking
    // the cycle in its orientation leaves (strongly feasible rule).
    double delta = std::numeric_limits<double>::infinity();
    std::size_t out = kNone;
    bool out_on_source_side = false;
    for (u = first; u != join; u = parent_[u]) {
      if (up_[u] && flow(u) < delta) {
        delta = flow(u);
        out = u;
        out_on_source_side = true;
      }
    }
    for (u = second; u != join; u = parent_[u]) {
      if (!up_[u] && flow(u) <= delta) {
        delta = flow(u);
        out = u;
        out_on_source_side = false;
      }
    }
    if (out == kNone) throw Error("network simplex: unbounded cycle");

    if (delta > 0.0) {
      dirty_ = true;
      for (u = first; u != join; u = parent_[u]) push(u, up_[u] ? -delta : delta);
      for (u = second; u != join; u = parent_[u]) push(u, up_[u] ? delta : -delta);
    }

    const std::size_t leaving = pred_[out];
    const std::size_t slot = slot_of_[leaving];
    slot_of_[leaving] = kNone;
    slot_arc_[slot] = entering;
    slot_of_[entering] = slot;
    slot_flow_[slot] = delta;
    drop_adjacent(src(leaving), leaving);
    drop_adjacent(dst(leaving), leaving);
    adj_[first].push_back(entering);
    adj_[second].push_back(entering);

    // The subtree below `out` now hangs from the entering arc.
    const std::size_t q = out_on_source_side ? first : second;
    const std::size_t p = out_on_source_side ? second : first;
    parent_[q] = p;
    pred_[q] = entering;
    up_[q] = out_on_source_side;  // entering runs first -> second
    depth_[q] = depth_[p] + 1;
    pi_[q] = up_[q] ? pi_[p] - cost_[entering] : pi_[p] + cost_[entering];
    order_.clear();
    order_.push_back(q);
    for (std::size_t h = 0; h < order_.size(); ++h) {
      const std::size_t x = order_[h];
      for (std::size_t a : adj_[x]) {
        if (a == pred_[x]) continue;
        hang(x, a);
        order_.push_back(src(a) != x ? src(a) : dst(a));
      }
    }
    if (order_.size() > nodes_) throw Error("network simplex: basis has a cycle");
  }

  void push(std::size_t u, double amount) {
    double& f = flow(u);
    f += amount;
    if (f < 1e-15) {
      if (f < -1e-9) throw Error("network simplex: basis lost primal feasibility");
      f = 0.0;
    }
  }

  void drop_adjacent(std::size_t u, std::size_t a) {
    auto& list = adj_[u];
    auto it = std::find(list.begin(), list.end(), a);
    *it = list.back();
    list.pop_back();
  }

  // Attaches the far end of tree arc a below u.
  void hang(std::size_t u, std::size_t a) {
    const bool up = src(a) != u;  // arc points from the child to u
    const std::size_t w = up ? src(a) : dst(a);
    parent_[w] = u;
    pred_[w] = a;
    up_[w] = up;
    depth_[w] = depth_[u] + 1;
    pi_[w] = up ? pi_[u] - arc_cost(a) : pi_[u] + arc_cost(a);
  }

  // Tree structure, potentials and flows from the current basis arcs.
  void rebuild() {
    order_.clear();
    order_.push_back(root_);
    parent_[root_] = kNone;
    pred_[root_] = kNone;
    depth_[root_] = 0;
    pi_[root_] = 0;
    for (std::size_t h = 0; h < order_.size(); ++h) {
      const std::size_t u = order_[h];
      for (std::size_t a : adj_[u]) {
        if (a == pred_[u]) continue;
        hang(u, a);
        order_.push_back(src(a) != u ? src(a) : dst(a));
        if (order_.size() > nodes_ + 1) throw Error("network simplex: basis has a cycle");
      }
    }
    if (order_.size() != nodes_ + 1) throw Error("network simplex: basis is not a tree");

    for (std::size_t u = 0; u <= nodes_; ++u) sub_[u] = supply_[u];
    for (std::size_t h = order_.size(); h-- > 1;) {
      const std::size_t u = order_[h];
      double f = up_[u] ? sub_[u] : -sub_[u];
      // Degenerate arcs come out as +-1 ulp-sized residues; they are zero.
      if (f < -1e-9) throw Error("network simplex: basis lost primal feasibility");
      if (f < 1e-15) f = 0.0;
      flow(u) = f;
      sub_[parent_[u]] += sub_[u];
    }
    dirty_ = false;
  }

  SimplexSolution solution(std::size_t pivots) const {
    SimplexSolution sol;
    sol.pivots = pivots;
    for (std::size_t u = 0; u < nodes_ + 1; ++u) {
      if (u == root_) continue;
      const std::size_t a = pred_[u];
      if (a >= real_arcs_) {
        if (flow(u) > 1e-12) throw Error("network simplex: artificial flow remains");
        continue;
      }
      if (flow(u) <= 0.0) continue;
      sol.rows.push_back(a / k_);
      sol.cols.push_back(a % k_);
      sol.flows.push_back(flow(u));
    }
    sol.u.resize(m_);
    sol.v.resize(k_);
    for (std::size_t i = 0; i < m_; ++i) sol.u[i] = -static_cast<double>(pi_[i]);
    for (std::size_t j = 0; j < k_; ++j) sol.v[j] = static_cast<double>(pi_[m_ + j]);
    std::int64_t min_rc = std::numeric_limits<std::int64_t>::max();
    for (std::size_t a = 0; a < real_arcs_; ++a) min_rc = std::min(min_rc, reduced_cost(a));
    sol.min_reduced_cost = real_arcs_ ? min_rc : 0;
    return sol;
  }

  std::size_t m_, k_, nodes_, root_, real_arcs_;
  std::span<const std::int64_t> cost_;
  std::int64_t art_cost_ = 0;
  std::vector<double> supply_;
  // The basis: one arc and its flow per slot.
  std::vector<std::size_t> slot_arc_;
  std::vector<double> slot_flow_;
  std::vector<std::size_t> slot_of_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> parent_, pred_, depth_;
  std::vector<char> up_;
  std::vector<std::int64_t> pi_;
  std::vector<std::size_t> order_;
  std::vector<double> sub_;
  bool dirty_ = false;
};

}  // namespace

SimplexSolution network_simplex(std::span<const double> supply,
                                std::span<const double> demand,
                                std::span<const std::int64_t> cost) {
  if (supply.empty() || demand.empty()) {
    throw ConfigError("network simplex: empty supply or demand");
  }
  if (cost.size() != supply.size() * demand.size()) {
    throw ConfigError("network simplex: cost matrix has the wrong size");
  }
  for (double s : supply)
    if (!(s > 0.0)) throw ConfigError("network simplex: supplies must be positive");
  for (double d : demand)
    if (!(d > 0.0)) throw ConfigError("network simplex: demands must be positive");
  Solver solver(supply, demand, cost);
  return solver.run();
}

}  // namespace gibbsdecomp::transport
