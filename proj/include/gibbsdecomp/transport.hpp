#pragma once

// Transportation distance over d_n between two distributions on the same
// product space: exact by network simplex, approximate by entropic
// regularization, and the Marton upper bound against product measures.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/space.hpp"

namespace gibbsdecomp {

inline constexpr std::size_t kDefaultTransportBudget = 4096;
// Costs are integerized as round(d_n * kCostScale) for the exact solver.
inline constexpr double kCostScale = 1e9;

struct TransportEntry {
  std::size_t source;  // configuration index under mu
  std::size_t target;  // configuration index under nu
  double mass;
};

struct TransportPlan {
  // Nonzero coupling entries sorted by (source, target).
  std::vector<TransportEntry> coupling;
  // sum of coupling * d_n with the unrounded costs.
  double cost = 0.0;
  // Largest |row sum - mu(x)| or |column sum - nu(y)|.
  double marginal_error = 0.0;

  // Exact solver certificate, all in cost units. The reduced costs are
  // integers in units of 1/kCostScale.
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double min_reduced_cost = 0.0;
  // Upper bound on |cost - optimal value| caused by integerizing costs.
  double rounding_bound = 0.0;
  std::size_t pivots = 0;
};

struct DbarResult {
  double value = 0.0;
  TransportPlan plan;
};

// Throws BudgetExceeded when either support exceeds support_budget.
DbarResult dbar_exact(const Distribution& mu, const Distribution& nu,
                      std::size_t support_budget = kDefaultTransportBudget);
// Same on raw weight vectors over the enumeration of `space`.
DbarResult dbar_exact(const ProductSpace& space, std::span<const double> mu,
                      std::span<const double> nu,
                      std::size_t support_budget = kDefaultTransportBudget);

struct EntropicResult {
  // Cost of the rounded (exactly feasible) plan; never below the optimum.
  double value = 0.0;
  double reg = 0.0;
  // Marginal violation of the unrounded Sinkhorn plan at exit.
  double violation = 0.0;
  std::size_t iterations = 0;
  TransportPlan plan;
};

// reg <= 0 selects 1e-2 times the median nonzero cost. Throws
// NonConvergence carrying the achieved violation after max_iter sweeps.
EntropicResult dbar_entropic(const Distribution& mu, const Distribution& nu,
                             double reg = 0.0, std::size_t max_iter = 200000);

// sqrt(D(mu || xi) / (2n)); +inf when the divergence is infinite.
double marton_bound(const Distribution& mu, const ProductMeasure& xi);

// "source,target,mass" rows.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);

namespace transport {

struct SimplexSolution {
  // Basic real arcs with positive flow: (row, column, flow).
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<double> flows;
  // Dual potentials with u_i + v_j <= cost_ij, in integer cost units.
  std::vector<double> u;
  std::vector<double> v;
  std::int64_t min_reduced_cost = 0;
  std::size_t pivots = 0;
};

// Balanced transportation problem min sum c_ij p_ij over couplings of
// supply (length m) and demand (length k), cost row-major m x k. Supplies
// must be positive and have equal totals up to rounding.
SimplexSolution network_simplex(std::span<const double> supply,
                                std::span<const double> demand,
                                std::span<const std::int64_t> cost);

}  // namespace transport

}  // namespace gibbsdecomp
