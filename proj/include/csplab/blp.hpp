#pragma once

#include <vector>

#include "csplab/core.hpp"
#include "csplab/ratlp.hpp"

namespace csplab {

// Exact optimum of the basic LP relaxation. Each p_v sums to 1, each p_C's
// marginals agree with the p_v exactly, and every p_v probability times
// `denominator` is an integer.
struct LPSolution {
  std::vector<std::vector<Rational>> p_v;  // [variable][label]
  std::vector<std::vector<Rational>> p_c;  // [constraint][tuple index]
  Rational blp_value;
  Integer denominator;  // lcm of the p_v entry denominators
};

// Solves the basic LP relaxation. Hard constraints enter as p_C(R) = 1 rows;
// only soft constraints are priced. Throws InfeasibleError when the hard part
// is LP-infeasible (possible only for mixed instances).
LPSolution solve_blp(const Instance& instance);

struct LossResult {
  Rational value;                  // min over couplings of 1 - p(R)
  std::vector<Rational> coupling;  // witnessing distribution over A^r
};

// Transportation LP: minimum mass outside R over couplings with the given
// marginals. Each marginal must be a distribution over the relation's domain.
LossResult loss(const std::vector<std::vector<Rational>>& marginals, const Relation& R);

struct LossIdentityReport {
  std::vector<bool> constraint_ok;  // 1 - p_C(R) == loss(marginals, R), exactly
  bool all_ok = true;
};

// Checks the per-constraint loss identity on a solved crisp instance.
LossIdentityReport verify_loss_identity(const Instance& instance, const LPSolution& solution);

struct MinCspImage {
  Instance crisp;
  Rational min_positive;  // m: minimal positive value over the payload tables
};

// Replaces every cost function by its zero set. For every assignment s,
// value_valued(s) <= value_crisp(s) <= value_valued(s)/m.
MinCspImage vcsp_to_mincsp(const Instance& valued);

// Multiplies denominator by the least t >= 1 with t*n >= target_min.
// Probabilities are unchanged.
LPSolution rescale_denominator(LPSolution solution, const Integer& target_min);

// Exact check of marginal consistency and simplex conditions; used by tests
// and the CLI's verbose report.
bool solution_is_consistent(const Instance& instance, const LPSolution& solution);

}  // namespace csplab
