#pragma once

// Every term of the three conclusions of the decomposition theorem for a
// given partition, the exact identity behind them, and the selection of one
// representative gradient per part.

#include <cstddef>
#include <vector>

#include "gibbsdecomp/cover.hpp"
#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/potential.hpp"

namespace gibbsdecomp {

struct DecomposeOptions {
  // Exact transport when both supports fit, Marton bound otherwise.
  std::size_t transport_budget = 256;
  std::size_t pair_budget = kDefaultPairBudget;
  // false skips every transport computation (KL terms only).
  bool transport = true;
  // Additive slack for the strict inequalities.
  double slack = 1e-9;
};

struct PartRecord {
  std::size_t id = 0;
  std::size_t size = 0;
  double mass = 0.0;
  double diameter = 0.0;
  // int D(mu_|P || xi_{grad f(y,.)}) mu_|P(dy)
  double kl_term = 0.0;
  // int dbar(mu_|P, xi_{grad f(y,.)}) mu_|P(dy)
  double transport_term = 0.0;
  bool transport_exact = true;
  // int int (grad f(y,y) - grad f(x,y)) mu_|P(dy) mu_|P(dx)
  double double_integral = 0.0;

  // Representative y_P minimizing the transport distance over y in P.
  std::size_t selected = 0;
  std::vector<double> selected_gradient;
  double selected_kl = 0.0;
  double selected_transport = 0.0;
};

struct DecompositionReport {
  std::size_t n = 0;
  std::size_t states = 0;
  std::size_t part_count = 0;
  // Parts of zero mu-mass (skipped before conditioning).
  std::size_t null_parts = 0;

  double log_z = 0.0;
  double dtc = 0.0;        // from the definition
  double dtc_gibbs = 0.0;  // from the gradient formula
  double partition_entropy = 0.0;
  double diameter = 0.0;
  double delta_eff = 0.0;
  bool diameter_exact = true;
  double epsilon = 0.0;  // log(part count) / n

  double a_lhs = 0.0, a_rhs = 0.0;
  double b_lhs = 0.0, b_rhs = 0.0;
  double c_lhs = 0.0, c_rhs = 0.0;
  bool a_holds = false, b_holds = false, c_holds = false;
  bool transport_computed = false;
  bool transport_exact = true;  // false when some pair used the Marton bound

  double cor_kl_lhs = 0.0, cor_kl_rhs = 0.0;
  double cor_transport_lhs = 0.0, cor_transport_rhs = 0.0;
  bool cor_kl_holds = false, cor_transport_holds = false;

  double identity_lhs = 0.0, identity_rhs = 0.0;
  double identity_residual = 0.0;  // |lhs - rhs|
  bool identity_holds = false;     // residual < 1e-8 max(1, |lhs|)
  double integrals_residual = 0.0;

  std::size_t transport_budget = 0;
  std::vector<PartRecord> parts;
};

// The whole computation for one partition. Parts come out in partition
// order; epsilon is computed from the partition's part count.
DecompositionReport decompose(const Potential& f, const PartitionOfSpace& P,
                              const DecomposeOptions& options = {});

DecompositionReport theorem_a_terms(const Potential& f, const PartitionOfSpace& P,
                                    const DecomposeOptions& options = {});
DecompositionReport corollary_a_select(const Potential& f, const GradientCover& cover,
                                       const DecomposeOptions& options = {});

// |lhs - rhs| of the identity
//   DTC + sum_P mu(P) int D(mu_|P || xi_y) dmu_|P(y)
//     = H_mu(P) + sum_P mu(P) int int (grad f(y,y) - grad f(x,y)) dmu_|P dmu_|P.
double dem_identity_residual(const Potential& f, const PartitionOfSpace& P);

// | int grad f(x,x) dmu(x) - int int grad f(x,y) dxi_{grad f(x,.)}(y) dmu(x) |.
double integrals_equal_residual(const Potential& f);
double integrals_equal_residual(const GibbsMeasure& mu, const GradientMap& grad);

}  // namespace gibbsdecomp
