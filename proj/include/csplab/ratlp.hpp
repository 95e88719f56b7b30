#pragma once

#include <vector>

#include "csplab/rational.hpp"

namespace csplab {

enum class Cmp { Le, Eq, Ge };

struct LPRow {
  std::vector<Rational> coeffs;
  Cmp cmp = Cmp::Eq;
  Rational rhs;
};

// minimize objective . x  subject to rows, x >= lower_bounds (default 0).
struct LinearProgram {
  int num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LPRow> rows;
  std::vector<Rational> lower_bounds;  // empty means all zero

  void add_row(std::vector<Rational> coeffs, Cmp cmp, Rational rhs) {
    rows.push_back({std::move(coeffs), cmp, std::move(rhs)});
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rational> point;  // only for Optimal
  Rational value;               // objective . point, exact
};

// Two-phase simplex with Bland's rule, exact arithmetic throughout
// (integer tableau with a common denominator). Deterministic.
LPOutcome simplex_solve(const LinearProgram& lp);

}  // namespace csplab
