#pragma once

// Lipschitz constants, the approximate fixed-point equation for the
// representative product measures, the tanh iteration on {-1,+1}^n, and the
// mean-field upper bound on the log partition function.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gibbsdecomp/cover.hpp"
#include "gibbsdecomp/decompose.hpp"
#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/potential.hpp"

namespace gibbsdecomp {

struct LipschitzEstimate {
  double value = 0.0;
  // "pairs": sup over all distinct pairs. "adjacent": sup over pairs that
  // differ in one coordinate; this equals the full sup because d_n is
  // additive along the path that changes one coordinate at a time.
  std::string regime;
  bool exact = true;
};

// L_grad = sup ||grad f(x,.) - grad f(y,.)|| / d_n(x,y).
LipschitzEstimate gradient_lipschitz(const GradientMap& grad,
                                     std::size_t pair_budget = kDefaultPairBudget);
LipschitzEstimate gradient_lipschitz(const Potential& f,
                                     std::size_t pair_budget = kDefaultPairBudget);
// L_f = sup |f(x) - f(y)| / d_n(x,y).
LipschitzEstimate potential_lipschitz(const Potential& f,
                                      std::size_t pair_budget = kDefaultPairBudget);

struct FixedPointRecord {
  // ||g_P - int grad f(x,.) xi_{g_P}(dx)|| per part of the report.
  std::vector<double> residuals;
  double weighted_sum = 0.0;
  double lipschitz = 0.0;
  bool lipschitz_exact = true;
  // delta_eff n + L sqrt((H/n + delta_eff) / 2)
  double bound = 0.0;
  bool holds = false;
};

FixedPointRecord fixed_point_residuals(const Potential& f, const DecompositionReport& report,
                                       std::size_t pair_budget = kDefaultPairBudget);

// E_xi[f(x) | x_i = a] for every a, with xi given by flat factors.
std::vector<double> conditional_expectation(const Potential& f, std::span<const double> factors,
                                            std::size_t coord);
// int f dxi.
double expectation(const Potential& f, std::span<const double> factors);
// int f dxi - D(xi || lambda).
double mean_field_objective(const Potential& f, const ProductMeasure& xi);

struct TanhResult {
  std::vector<double> m;
  std::size_t iterations = 0;
  // ||tanh(v(m)) - m||_inf at exit
  double residual = 0.0;
  std::vector<std::vector<double>> trajectory;
};

// v_i(m) = E_{xi(m)}[ (f(x|i:+1) - f(x|i:-1)) / 2 ] where xi(m) is the
// product measure with barycentre m (symbol 1 is +1, symbol 0 is -1).
std::vector<double> spin_field(const Potential& f, std::span<const double> m);

// Damped iteration m <- (1-a) m + a tanh(v(m)) until the fixed-point
// residual is below tol. Requires binary alphabets with uniform lambda.
// Throws NonConvergence with the trajectory after max_iter steps.
TanhResult tanh_fixed_point(const Potential& f, std::vector<double> m0, double tol = 1e-12,
                            std::size_t max_iter = 100000, double damping = 0.5);

struct AscentResult {
  std::vector<double> factors;
  double value = 0.0;
  std::size_t sweeps = 0;
  bool converged = false;
};

// Coordinate ascent on the mean-field objective from `start` (flat factors):
// each update sets xi_i proportional to lambda_i exp(E[f | x_i = .]). Stops
// when no factor entry moves by more than tol in a sweep.
AscentResult coordinate_ascent(const Potential& f, std::vector<double> start,
                               double tol = 1e-9, std::size_t max_sweeps = 10000);

struct MeanFieldOptions {
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  std::size_t pair_budget = kDefaultPairBudget;
  // Gradient products xi_{grad f(y,.)} are scored for every distinct row
  // while (distinct rows) x (states) stays within this many operations.
  std::size_t candidate_budget = std::size_t{1} << 26;
};

struct PartitionBoundRecord {
  double log_z_exact = 0.0;
  // Lower bound on the sup over product measures.
  double mean_field_estimate = 0.0;
  std::string estimate_origin;
  std::vector<double> best_factors;
  bool converged = false;
  std::vector<double> restart_values;
  double restart_spread = 0.0;
  bool restarts_disagree = false;
  // Best objective among the gradient products (before ascent).
  double gradient_candidate_value = 0.0;
  std::size_t gradient_candidates = 0;

  double epsilon = 0.0;
  double delta_eff = 0.0;
  std::size_t part_count = 0;
  double lipschitz_f = 0.0;
  bool lipschitz_exact = true;
  double bound_rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

PartitionBoundRecord partition_function_bound(const Potential& f, const GradientCover& cover,
                                              const MeanFieldOptions& options = {});

struct FiniteUniformRecord {
  // log sum_x e^{f(x)}
  double log_sum = 0.0;
  // H(xi*) + int f dxi* at the mean-field maximizer found
  double entropy_estimate = 0.0;
  double bound_rhs = 0.0;
  double slack = 0.0;
  // Both sides differ from the lambda form by sum_i log|K_i|; largest
  // deviation from that.
  double residual = 0.0;
  double log_alphabet_total = 0.0;
};

// Requires uniform lambda (ConfigError otherwise).
FiniteUniformRecord finite_uniform_form(const Potential& f, const PartitionBoundRecord& record);

}  // namespace gibbsdecomp
