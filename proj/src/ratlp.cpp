#include "csplab/ratlp.hpp"

#include <gmp.h>

#include <algorithm>
#include <stdexcept>

namespace csplab {

namespace {

// Dense integer tableau T with common denominator det > 0: the rational
// simplex tableau w.r.t. the current basis is T/det. Pivoting keeps entries
// integral (entries are minors of the scaled input matrix), so no per-entry
// gcd work is ever needed.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), det_(1) {
    data_.assign(rows * cols, Integer(0));
  }

  Integer& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const Integer& det() const { return det_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Fraction-free pivot on (r, p); requires T[r][p] != 0. If the pivot entry
  // is negative the whole tableau is negated afterwards so det stays > 0.
  void pivot(std::size_t r, std::size_t p) {
    Integer piv = at(r, p);
    if (piv == 0) throw std::logic_error("pivot on zero entry");
    mpz_srcptr pivz = piv.backend().data();
    mpz_srcptr detz = det_.backend().data();
    mpz_t acc;
    mpz_init(acc);
    Integer tip_val;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      Integer* row = &data_[i * cols_];
      const Integer* prow = &data_[r * cols_];
      tip_val = row[p];  // copy: row[p] itself is rewritten below
      mpz_srcptr tip = tip_val.backend().data();
      bool tip_zero = mpz_sgn(tip) == 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        mpz_ptr tij = row[j].backend().data();
        if (tip_zero) {
          if (mpz_sgn(tij) == 0) continue;
          mpz_mul(acc, tij, pivz);
          mpz_divexact(tij, acc, detz);
        } else {
          mpz_srcptr trj = prow[j].backend().data();
          mpz_mul(acc, tij, pivz);
          mpz_submul(acc, tip, trj);
          mpz_divexact(tij, acc, detz);
        }
      }
    }
    mpz_clear(acc);
    det_ = piv;
    if (det_ < 0) {
      for (Integer& x : data_) mpz_neg(x.backend().data(), x.backend().data());
      mpz_neg(det_.backend().data(), det_.backend().data());
    }
  }

 private:
  std::size_t rows_, cols_;
  Integer det_;
  std::vector<Integer> data_;
};

struct Standardized {
  // Columns: [0, n_struct) structural, [n_struct, n_struct + n_slack) slacks,
  // then artificials; last column is the rhs.
  std::size_t n_struct = 0, n_slack = 0, n_art = 0;
  std::vector<std::vector<Integer>> rows;  // integer rows incl. rhs
  std::vector<int> basis;                  // initial basic column per row
  std::vector<Integer> objective;          // scaled objective on structural cols
};

Integer lcm_of_denominators(const std::vector<Rational>& v, const Rational& extra) {
  Integer l = den(extra);
  for (const Rational& x : v) l = lcm(l, den(x));
  return l;
}

}  // namespace

LPOutcome simplex_solve(const LinearProgram& lp) {
  const std::size_t n = static_cast<std::size_t>(lp.num_vars);
  if (lp.objective.size() != n) throw std::invalid_argument("objective size mismatch");
  if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != n)
    throw std::invalid_argument("lower bound size mismatch");
  for (const LPRow& row : lp.rows)
    if (row.coeffs.size() != n) throw std::invalid_argument("row size mismatch");

  std::vector<Rational> lb(n, Rational(0));
  if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;

  const std::size_t m = lp.rows.size();

  // Shift x = y + lb, scale each row to integers. Le rows with nonnegative
  // scaled rhs keep a unit slack as the initial basic variable; everything
  // else gets an artificial.
  Standardized st;
  st.n_struct = n;
  for (const LPRow& row : lp.rows)
    if (row.cmp != Cmp::Eq) ++st.n_slack;

  std::size_t slack_cursor = st.n_struct;
  std::vector<std::vector<Rational>> scaled_rows;
  std::vector<int> slack_col(m, -1), slack_sign(m, 0);
  std::vector<bool> needs_artificial(m, false);

  for (std::size_t i = 0; i < m; ++i) {
    const LPRow& row = lp.rows[i];
    std::vector<Rational> coeffs = row.coeffs;
    Rational rhs = row.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= coeffs[j] * lb[j];
    if (row.cmp == Cmp::Ge) {
      for (Rational& c : coeffs) c = -c;
      rhs = -rhs;
    }
    // Now Le or Eq. Scale to integers.
    Integer scale = lcm_of_denominators(coeffs, rhs);
    std::vector<Integer> irow(n + 1);
    for (std::size_t j = 0; j < n; ++j) irow[j] = num(coeffs[j] * scale);
    Integer irhs = num(rhs * scale);
    int ssign = (row.cmp == Cmp::Eq) ? 0 : 1;
    if (irhs < 0) {
      for (Integer& c : irow) c = -c;
      irhs = -irhs;
      ssign = -ssign;
    }
    irow[n] = irhs;
    st.rows.push_back(std::move(irow));
    if (row.cmp != Cmp::Eq) {
      slack_col[i] = static_cast<int>(slack_cursor++);
      slack_sign[i] = ssign;
    }
    needs_artificial[i] = !(slack_sign[i] == 1);
  }

  std::size_t art_cursor = st.n_struct + st.n_slack;
  std::vector<int> art_col(m, -1);
  for (std::size_t i = 0; i < m; ++i)
    if (needs_artificial[i]) {
      art_col[i] = static_cast<int>(art_cursor++);
      ++st.n_art;
    }

  const std::size_t ncols = st.n_struct + st.n_slack + st.n_art + 1;  // + rhs
  const std::size_t rhs_col = ncols - 1;
  const std::size_t obj_row = m;      // phase-2 reduced costs
  const std::size_t p1_row = m + 1;   // phase-1 reduced costs

  Tableau T(m + 2, ncols);
  std::vector<int> basis(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T.at(i, j) = st.rows[i][j];
    T.at(i, rhs_col) = st.rows[i][n];
    if (slack_col[i] >= 0) T.at(i, static_cast<std::size_t>(slack_col[i])) = Integer(slack_sign[i]);
    if (art_col[i] >= 0) T.at(i, static_cast<std::size_t>(art_col[i])) = 1;
    basis[i] = needs_artificial[i] ? art_col[i] : slack_col[i];
  }

  // Phase-2 objective on y (constant offset handled at extraction).
  Integer obj_scale = lcm_of_denominators(lp.objective, Rational(1));
  for (std::size_t j = 0; j < n; ++j) T.at(obj_row, j) = num(lp.objective[j] * obj_scale);

  // Phase-1 objective: minimize the sum of artificials.
  bool have_artificials = st.n_art > 0;
  if (have_artificials) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!needs_artificial[i]) continue;
      for (std::size_t j = 0; j < ncols; ++j)
        if (j != static_cast<std::size_t>(art_col[i])) T.at(p1_row, j) -= T.at(i, j);
    }
  }

  const std::size_t first_art = st.n_struct + st.n_slack;
  auto is_artificial = [&](std::size_t col) { return col >= first_art && col < rhs_col; };

  // Bland: entering = lowest-index column with negative reduced cost;
  // leaving = lexicographic min ratio, ties by lowest basic column index.
  auto run_phase = [&](std::size_t cost_row, bool allow_artificial_entering) -> bool {
    for (;;) {
      std::size_t entering = rhs_col;
      for (std::size_t j = 0; j + 1 < ncols; ++j) {
        if (!allow_artificial_entering && is_artificial(j)) continue;
        if (T.at(cost_row, j) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == rhs_col) return true;  // optimal for this phase
      std::size_t leave = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (T.at(i, entering) <= 0) continue;
        if (leave == m) {
          leave = i;
          continue;
        }
        // compare rhs_i / a_i vs rhs_l / a_l via cross-multiplication
        Integer lhs = T.at(i, rhs_col) * T.at(leave, entering);
        Integer rhs = T.at(leave, rhs_col) * T.at(i, entering);
        if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
      }
      if (leave == m) return false;  // unbounded
      T.pivot(leave, entering);
      basis[leave] = static_cast<int>(entering);
    }
  };

  if (have_artificials) {
    if (!run_phase(p1_row, true)) throw std::logic_error("phase 1 unbounded");
    if (T.at(p1_row, rhs_col) != 0) return {LPStatus::Infeasible, {}, Rational(0)};
    // Drive artificials out of the basis. Rows with no nonzero structural or
    // slack entry are redundant and stay inert at value zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial(static_cast<std::size_t>(basis[i]))) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (T.at(i, j) != 0) {
          T.pivot(i, j);
          basis[i] = static_cast<int>(j);
          break;
        }
      }
    }
  }

  if (!run_phase(obj_row, false)) return {LPStatus::Unbounded, {}, Rational(0)};

  std::vector<Rational> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = lb[j];
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t b = static_cast<std::size_t>(basis[i]);
    if (b < n) x[b] += Rational(T.at(i, rhs_col), T.det());
  }
  Rational value(0);
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * x[j];
  return {LPStatus::Optimal, std::move(x), std::move(value)};
}

}  // namespace csplab
