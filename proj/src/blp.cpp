#include "csplab/blp.hpp"

#include <algorithm>
#include <stdexcept>

namespace csplab {

namespace {

// Column layout: p_v blocks first (num_vars * |A|), then one block of |A|^r
// tuple variables per constraint.
struct BlpLayout {
  std::size_t var_base(int v, int domain) const { return static_cast<std::size_t>(v) * domain; }
  std::vector<std::size_t> c_base;
  std::size_t total = 0;
};

}  // namespace

LPSolution solve_blp(const Instance& instance) {
  const int domain = instance.domain().size;
  const auto& constraints = instance.constraints();

  BlpLayout layout;
  layout.total = static_cast<std::size_t>(instance.num_vars()) * domain;
  for (const Constraint& c : constraints) {
    layout.c_base.push_back(layout.total);
    layout.total += power_checked(domain, static_cast<int>(c.scope.size()), 50'000'000);
  }

  LinearProgram lp;
  lp.num_vars = static_cast<int>(layout.total);
  lp.objective.assign(layout.total, Rational(0));

  auto blank_row = [&]() { return std::vector<Rational>(layout.total, Rational(0)); };

  // p_v(A) = 1
  for (int v = 0; v < instance.num_vars(); ++v) {
    auto row = blank_row();
    for (int a = 0; a < domain; ++a) row[layout.var_base(v, domain) + a] = 1;
    lp.add_row(std::move(row), Cmp::Eq, Rational(1));
  }

  for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
    const Constraint& c = constraints[ci];
    const int r = static_cast<int>(c.scope.size());
    const std::size_t tuples = power_checked(domain, r, 50'000'000);
    const std::size_t base = layout.c_base[ci];

    // total mass 1
    {
      auto row = blank_row();
      for (std::size_t t = 0; t < tuples; ++t) row[base + t] = 1;
      lp.add_row(std::move(row), Cmp::Eq, Rational(1));
    }
    // marginal consistency; the last label's row per coordinate is implied
    // by the two normalization rows and is dropped.
    for (int j = 0; j < r; ++j) {
      for (int a = 0; a + 1 < domain; ++a) {
        auto row = blank_row();
        for (std::size_t t = 0; t < tuples; ++t) {
          Tuple tup = decode_tuple(t, r, domain);
          if (tup[static_cast<std::size_t>(j)] == a) row[base + t] = 1;
        }
        row[layout.var_base(c.scope[static_cast<std::size_t>(j)], domain) + a] = -1;
        lp.add_row(std::move(row), Cmp::Eq, Rational(0));
      }
    }
    if (c.hard) {
      const Relation& rel = std::get<Relation>(instance.payload_of(c));
      auto row = blank_row();
      for (std::size_t t = 0; t < tuples; ++t)
        if (rel.contains_index(t)) row[base + t] = 1;
      lp.add_row(std::move(row), Cmp::Eq, Rational(1));
    } else {
      const Payload& p = instance.payload_of(c);
      for (std::size_t t = 0; t < tuples; ++t) {
        Rational cost = payload_cost(p, decode_tuple(t, r, domain));
        if (cost != 0) lp.objective[base + t] += c.weight * cost;
      }
    }
  }

  LPOutcome out = simplex_solve(lp);
  if (out.status == LPStatus::Infeasible)
    throw InfeasibleError("basic LP relaxation infeasible (hard constraints conflict)");
  if (out.status != LPStatus::Optimal) throw std::logic_error("BLP cannot be unbounded");

  LPSolution sol;
  sol.blp_value = out.value;
  sol.p_v.resize(static_cast<std::size_t>(instance.num_vars()));
  Integer n(1);
  for (int v = 0; v < instance.num_vars(); ++v) {
    auto& dist = sol.p_v[static_cast<std::size_t>(v)];
    dist.resize(static_cast<std::size_t>(domain));
    for (int a = 0; a < domain; ++a) {
      dist[static_cast<std::size_t>(a)] = out.point[layout.var_base(v, domain) + a];
      n = lcm(n, den(dist[static_cast<std::size_t>(a)]));
    }
  }
  sol.denominator = n;
  sol.p_c.resize(constraints.size());
  for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
    const std::size_t tuples =
        power_checked(domain, static_cast<int>(constraints[ci].scope.size()), 50'000'000);
    sol.p_c[ci].assign(out.point.begin() + static_cast<std::ptrdiff_t>(layout.c_base[ci]),
                       out.point.begin() + static_cast<std::ptrdiff_t>(layout.c_base[ci] + tuples));
  }
  return sol;
}

LossResult loss(const std::vector<std::vector<Rational>>& marginals, const Relation& R) {
  const int r = R.arity();
  const int domain = R.domain_size();
  if (static_cast<int>(marginals.size()) != r)
    throw std::invalid_argument("loss: expected one marginal per coordinate");
  for (const auto& p : marginals) {
    if (static_cast<int>(p.size()) != domain)
      throw std::invalid_argument("loss: marginal size does not match domain");
    Rational total(0);
    for (const Rational& x : p) {
      if (x < 0) throw std::invalid_argument("loss: negative marginal entry");
      total += x;
    }
    if (total != 1) throw std::invalid_argument("loss: marginal does not sum to 1");
  }

  const std::size_t tuples = power_checked(domain, r, 50'000'000);
  LinearProgram lp;
  lp.num_vars = static_cast<int>(tuples);
  lp.objective.assign(tuples, Rational(0));
  for (std::size_t t = 0; t < tuples; ++t)
    if (!R.contains_index(t)) lp.objective[t] = 1;

  for (int j = 0; j < r; ++j) {
    for (int a = 0; a < domain; ++a) {
      std::vector<Rational> row(tuples, Rational(0));
      for (std::size_t t = 0; t < tuples; ++t)
        if (decode_tuple(t, r, domain)[static_cast<std::size_t>(j)] == a) row[t] = 1;
      lp.add_row(std::move(row), Cmp::Eq, marginals[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)]);
    }
  }

  LPOutcome out = simplex_solve(lp);
  if (out.status != LPStatus::Optimal)
    throw std::logic_error("transportation polytope is never empty for valid marginals");
  return {out.value, std::move(out.point)};
}

LossIdentityReport verify_loss_identity(const Instance& instance, const LPSolution& solution) {
  if (instance.kind() != InstanceKind::Crisp)
    throw std::invalid_argument("verify_loss_identity expects a crisp instance");
  LossIdentityReport report;
  const auto& constraints = instance.constraints();
  for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
    const Constraint& c = constraints[ci];
    const Relation& rel = std::get<Relation>(instance.payload_of(c));
    Rational mass_in(0);
    for (std::size_t t = 0; t < solution.p_c[ci].size(); ++t)
      if (rel.contains_index(t)) mass_in += solution.p_c[ci][t];
    std::vector<std::vector<Rational>> marginals;
    for (int v : c.scope) marginals.push_back(solution.p_v[static_cast<std::size_t>(v)]);
    Rational lhs = Rational(1) - mass_in;
    bool ok = (lhs == loss(marginals, rel).value);
    report.constraint_ok.push_back(ok);
    report.all_ok = report.all_ok && ok;
  }
  return report;
}

MinCspImage vcsp_to_mincsp(const Instance& valued) {
  if (valued.kind() != InstanceKind::Valued)
    throw std::invalid_argument("vcsp_to_mincsp expects a valued instance");
  Rational m(0);
  bool found = false;
  for (const Payload& p : valued.payloads()) {
    const auto& cf = std::get<CostFunction>(p);
    for (const Rational& v : cf.table()) {
      if (v > 0 && (!found || v < m)) {
        m = v;
        found = true;
      }
    }
  }
  if (!found)
    throw std::invalid_argument("vcsp_to_mincsp: every cost function is identically zero");

  std::vector<Payload> payloads;
  for (const Payload& p : valued.payloads())
    payloads.emplace_back(std::get<CostFunction>(p).zero_set());
  Instance crisp(valued.num_vars(), valued.domain(), std::move(payloads), valued.constraints(),
                 InstanceKind::Crisp);
  return {std::move(crisp), std::move(m)};
}

LPSolution rescale_denominator(LPSolution solution, const Integer& target_min) {
  if (target_min < 1) throw std::invalid_argument("rescale target must be >= 1");
  Integer t = ceil_div(target_min, solution.denominator);
  if (t < 1) t = 1;
  solution.denominator *= t;
  return solution;
}

bool solution_is_consistent(const Instance& instance, const LPSolution& solution) {
  const int domain = instance.domain().size;
  if (static_cast<int>(solution.p_v.size()) != instance.num_vars()) return false;
  for (const auto& dist : solution.p_v) {
    Rational total(0);
    for (const Rational& x : dist) {
      if (x < 0) return false;
      total += x;
      if (den(x * solution.denominator) != 1) return false;
    }
    if (total != 1) return false;
  }
  const auto& constraints = instance.constraints();
  if (solution.p_c.size() != constraints.size()) return false;
  for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
    const Constraint& c = constraints[ci];
    const int r = static_cast<int>(c.scope.size());
    Rational total(0);
    for (const Rational& x : solution.p_c[ci]) {
      if (x < 0) return false;
      total += x;
    }
    if (total != 1) return false;
    for (int j = 0; j < r; ++j) {
      for (int a = 0; a < domain; ++a) {
        Rational marg(0);
        for (std::size_t t = 0; t < solution.p_c[ci].size(); ++t)
          if (decode_tuple(t, r, domain)[static_cast<std::size_t>(j)] == a)
            marg += solution.p_c[ci][t];
        if (marg != solution.p_v[static_cast<std::size_t>(c.scope[static_cast<std::size_t>(j)])]
                                [static_cast<std::size_t>(a)])
          return false;
      }
    }
  }
  return true;
}

}  // namespace csplab
