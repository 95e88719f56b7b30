#include "csplab/polylab.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace csplab {

namespace {

std::size_t product_checked(std::size_t base, int exp, std::size_t cap, const char* what) {
  if (base == 0) return exp == 0 ? 1 : 0;
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base)
      throw CapExceededError(std::string(what) + ": " + std::to_string(base) + "^" +
                             std::to_string(exp) + " exceeds cap " + std::to_string(cap));
    r *= base;
  }
  return r;
}

// C(m + n - 1, n), capped.
std::size_t multichoose_checked(std::size_t m, int n, std::size_t cap, const char* what) {
  Integer r = 1;
  for (int i = 1; i <= n; ++i) {
    r = r * Integer(m + static_cast<std::size_t>(i) - 1) / i;
    if (r > Integer(cap))
      throw CapExceededError(std::string(what) + ": C(" + std::to_string(m + n - 1) + "," +
                             std::to_string(n) + ") exceeds cap " + std::to_string(cap));
  }
  return static_cast<std::size_t>(r);
}

bool next_multicombination(std::vector<int>& idx, int m) {
  int n = static_cast<int>(idx.size());
  int i = n - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - 1) --i;
  if (i < 0) return false;
  int v = idx[static_cast<std::size_t>(i)] + 1;
  for (int j = i; j < n; ++j) idx[static_cast<std::size_t>(j)] = v;
  return true;
}

bool next_odometer(std::vector<int>& idx, int m) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (++idx[static_cast<std::size_t>(i)] < m) return true;
    idx[static_cast<std::size_t>(i)] = 0;
  }
  return false;
}

}  // namespace

int Multiset::size() const { return std::accumulate(counts.begin(), counts.end(), 0); }

MultisetSpace::MultisetSpace(int domain_size, int n, std::size_t cap)
    : domain_size_(domain_size), n_(n) {
  if (domain_size_ < 1 || n_ < 1) throw std::invalid_argument("multiset space needs |A|,n >= 1");
  count(domain_size_, n_, cap);
  std::vector<int> counts(static_cast<std::size_t>(domain_size_), 0);
  // lexicographic enumeration of count vectors summing to n
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == domain_size_ - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      index_[counts] = elements_.size();
      elements_.push_back({counts});
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, n_);
}

std::size_t MultisetSpace::count(int domain_size, int n, std::size_t cap) {
  return multichoose_checked(static_cast<std::size_t>(domain_size), n, cap, "|Delta_n(A)|");
}

std::size_t MultisetSpace::index_of(const Multiset& m) const {
  auto it = index_.find(m.counts);
  if (it == index_.end()) throw std::invalid_argument("multiset not in this space");
  return it->second;
}

std::vector<Rational> MultisetSpace::distribution(std::size_t idx) const {
  std::vector<Rational> p;
  for (int c : elements_[idx].counts) p.emplace_back(c, n_);
  return p;
}

Multiset MultisetSpace::from_distribution(const std::vector<Rational>& p) const {
  if (static_cast<int>(p.size()) != domain_size_)
    throw std::invalid_argument("distribution size does not match domain");
  Multiset m;
  for (const Rational& x : p) {
    Rational scaled = x * n_;
    if (den(scaled) != 1)
      throw std::invalid_argument("distribution is not in Delta_n for n=" + std::to_string(n_));
    m.counts.push_back(static_cast<int>(num(scaled)));
  }
  return m;
}

GeneralOperation SymmetricOperation::to_general(std::size_t cap) const {
  const int d = domain_size();
  const int n = arity();
  std::size_t total = product_checked(static_cast<std::size_t>(d), n, cap, "|A|^n table");
  GeneralOperation g{d, n, std::vector<Label>(total, 0)};
  for (std::size_t t = 0; t < total; ++t) {
    Tuple args = decode_tuple(t, n, d);
    Multiset m{std::vector<int>(static_cast<std::size_t>(d), 0)};
    for (Label a : args) ++m.counts[static_cast<std::size_t>(a)];
    g.table[t] = apply(m);
  }
  return g;
}

void FractionalOperation::validate() const {
  if (support.empty()) throw std::invalid_argument("fractional operation has empty support");
  Rational total(0);
  const int d = support.front().first.domain_size();
  const int n = support.front().first.arity();
  for (const auto& [op, w] : support) {
    if (op.domain_size() != d || op.arity() != n)
      throw std::invalid_argument("fractional operation support must share domain and arity");
    if (w <= 0) throw std::invalid_argument("fractional operation weights must be positive");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("fractional operation weights must sum to 1");
}

bool is_polymorphism(const GeneralOperation& op, const Language& language, std::size_t cap) {
  if (op.domain_size != language.domain().size)
    throw std::invalid_argument("operation domain does not match language");
  const int n = op.arity;
  for (const Payload& member : language.members()) {
    Relation R = payload_zero_relation(member);
    const auto& rows = R.tuples();
    if (rows.empty()) continue;  // no tuples, nothing to preserve
    product_checked(rows.size(), n, cap, "|R|^n preservation check");
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    Tuple image(static_cast<std::size_t>(R.arity()));
    Tuple column(static_cast<std::size_t>(n));
    do {
      for (int j = 0; j < R.arity(); ++j) {
        for (int i = 0; i < n; ++i)
          column[static_cast<std::size_t>(i)] =
              rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]
                  [static_cast<std::size_t>(j)];
        image[static_cast<std::size_t>(j)] = op.apply(column);
      }
      if (!R.contains(image)) return false;
    } while (next_odometer(pick, static_cast<int>(rows.size())));
  }
  return true;
}

bool is_polymorphism(const SymmetricOperation& op, const Language& language, std::size_t cap) {
  if (op.domain_size() != language.domain().size)
    throw std::invalid_argument("operation domain does not match language");
  const int n = op.arity();
  const int d = op.domain_size();
  for (const Payload& member : language.members()) {
    Relation R = payload_zero_relation(member);
    const auto& rows = R.tuples();
    if (rows.empty()) continue;
    multichoose_checked(rows.size(), n, cap, "row multisets in preservation check");
    // a symmetric operation's image depends only on the multiset of rows
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    Tuple image(static_cast<std::size_t>(R.arity()));
    Multiset column{std::vector<int>(static_cast<std::size_t>(d), 0)};
    do {
      for (int j = 0; j < R.arity(); ++j) {
        std::fill(column.counts.begin(), column.counts.end(), 0);
        for (int i = 0; i < n; ++i)
          ++column.counts[static_cast<std::size_t>(
              rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]
                  [static_cast<std::size_t>(j)])];
        image[static_cast<std::size_t>(j)] = op.apply(column);
      }
      if (!R.contains(image)) return false;
    } while (next_multicombination(pick, static_cast<int>(rows.size())));
  }
  return true;
}

OperationClass classify_operation(const GeneralOperation& op) {
  OperationClass c;
  const int d = op.domain_size;
  const int n = op.arity;

  c.idempotent = true;
  for (Label x = 0; x < d; ++x) {
    Tuple t(static_cast<std::size_t>(n), x);
    if (op.apply(t) != x) {
      c.idempotent = false;
      break;
    }
  }

  c.symmetric = true;
  for (std::size_t i = 0; i < op.table.size() && c.symmetric; ++i) {
    Tuple t = decode_tuple(i, n, d);
    Tuple sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (op.table[i] != op.apply(sorted)) c.symmetric = false;
  }

  c.totally_symmetric = true;
  {
    std::vector<Label> by_support(static_cast<std::size_t>(1) << d, -1);
    for (std::size_t i = 0; i < op.table.size() && c.totally_symmetric; ++i) {
      Tuple t = decode_tuple(i, n, d);
      std::size_t mask = 0;
      for (Label a : t) mask |= static_cast<std::size_t>(1) << a;
      if (by_support[mask] == -1)
        by_support[mask] = op.table[i];
      else if (by_support[mask] != op.table[i])
        c.totally_symmetric = false;
    }
  }

  bool near_identities_to_x = true;   // f(y,x,..,x) = ... = x
  bool near_identities_equal = true;  // all positions agree with each other
  for (Label x = 0; x < d; ++x) {
    for (Label y = 0; y < d; ++y) {
      Label first = -1;
      for (int pos = 0; pos < n; ++pos) {
        Tuple t(static_cast<std::size_t>(n), x);
        t[static_cast<std::size_t>(pos)] = y;
        Label v = op.apply(t);
        if (v != x) near_identities_to_x = false;
        if (pos == 0)
          first = v;
        else if (v != first)
          near_identities_equal = false;
      }
    }
  }
  c.nu = (n >= 3) && near_identities_to_x;
  c.wnu = c.idempotent && near_identities_equal;
  return c;
}

namespace {

struct TableConstraint {
  std::vector<std::size_t> positions;  // table indices, one per relation coordinate
  const Relation* relation;
  std::size_t max_position;
};

// Enumerate preservation constraints over a symmetric table: one per
// (member, multiset of member rows), deduplicated. Empty members contribute
// nothing (preservation is vacuous).
std::vector<TableConstraint> symmetric_table_constraints(const MultisetSpace& space,
                                                         const std::vector<Relation>& zero_relations,
                                                         std::size_t cap) {
  const int n = space.n();
  const int d = space.domain_size();
  std::vector<TableConstraint> out;
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;
  for (std::size_t mi = 0; mi < zero_relations.size(); ++mi) {
    const Relation& R = zero_relations[mi];
    const auto& rows = R.tuples();
    if (rows.empty()) continue;
    multichoose_checked(rows.size(), n, cap, "row multisets in enumeration");
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    do {
      std::vector<std::size_t> positions;
      positions.reserve(static_cast<std::size_t>(R.arity()));
      for (int j = 0; j < R.arity(); ++j) {
        Multiset column{std::vector<int>(static_cast<std::size_t>(d), 0)};
        for (int i = 0; i < n; ++i)
          ++column.counts[static_cast<std::size_t>(
              rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]
                  [static_cast<std::size_t>(j)])];
        positions.push_back(space.index_of(column));
      }
      if (seen.insert({mi, positions}).second) {
        std::size_t mx = *std::max_element(positions.begin(), positions.end());
        out.push_back({std::move(positions), &R, mx});
      }
    } while (next_multicombination(pick, static_cast<int>(rows.size())));
  }
  return out;
}

}  // namespace

std::vector<SymmetricOperation> enumerate_symmetric_polymorphisms(const Language& language, int n,
                                                                  std::size_t cap) {
  auto space = std::make_shared<MultisetSpace>(language.domain().size, n, cap);
  std::vector<Relation> zero_relations;
  for (const Payload& member : language.members())
    zero_relations.push_back(payload_zero_relation(member));

  auto constraints = symmetric_table_constraints(*space, zero_relations, cap);
  std::vector<std::vector<const TableConstraint*>> by_position(space->size());
  for (const TableConstraint& c : constraints) by_position[c.max_position].push_back(&c);

  const int d = language.domain().size;
  std::vector<Label> table(space->size(), -1);
  std::vector<SymmetricOperation> results;
  Tuple image;

  auto consistent_at = [&](std::size_t pos) {
    for (const TableConstraint* c : by_position[pos]) {
      image.clear();
      for (std::size_t p : c->positions) image.push_back(table[p]);
      if (!c->relation->contains(image)) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == table.size()) {
      results.push_back({space, table});
      return;
    }
    for (Label a = 0; a < d; ++a) {
      table[pos] = a;
      if (consistent_at(pos)) self(self, pos + 1);
    }
    table[pos] = -1;
  };
  rec(rec, 0);
  return results;
}

std::optional<GeneralOperation> find_nu_polymorphism(const Language& language, int n,
                                                     std::size_t cap) {
  if (n < 3) throw std::invalid_argument("NU operations require arity >= 3");
  const int d = language.domain().size;
  std::size_t total = product_checked(static_cast<std::size_t>(d), n, cap, "NU search table");

  std::vector<Label> table(total, -1);
  // pin near-unanimous inputs
  for (Label x = 0; x < d; ++x) {
    Tuple t(static_cast<std::size_t>(n), x);
    table[encode_tuple(t, d)] = x;
    for (int pos = 0; pos < n; ++pos) {
      for (Label y = 0; y < d; ++y) {
        Tuple u(static_cast<std::size_t>(n), x);
        u[static_cast<std::size_t>(pos)] = y;
        table[encode_tuple(u, d)] = x;
      }
    }
  }
  std::vector<std::size_t> free_positions;
  for (std::size_t i = 0; i < total; ++i)
    if (table[i] == -1) free_positions.push_back(i);
  // rank of a table entry: when it becomes known during the search
  // (pinned entries first, then free positions in index order)
  const std::size_t num_free = free_positions.size();
  std::vector<std::size_t> free_rank(total, 0);  // 0 = pinned, else 1 + position in search order
  for (std::size_t k = 0; k < num_free; ++k) free_rank[free_positions[k]] = k + 1;

  struct Check {
    std::vector<std::size_t> positions;
    const Relation* relation;
  };
  std::vector<Relation> zero_relations;
  for (const Payload& member : language.members())
    zero_relations.push_back(payload_zero_relation(member));

  // bucket k holds checks whose last-known entry is free position k-1
  // (bucket 0: checks over pinned entries only)
  std::vector<std::vector<Check>> buckets(num_free + 1);
  for (const Relation& R : zero_relations) {
    const auto& rows = R.tuples();
    if (rows.empty()) continue;
    product_checked(rows.size(), n, cap, "|R|^n in NU search");
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    do {
      std::vector<std::size_t> positions;
      std::size_t mx = 0;
      Tuple column(static_cast<std::size_t>(n));
      for (int j = 0; j < R.arity(); ++j) {
        for (int i = 0; i < n; ++i)
          column[static_cast<std::size_t>(i)] =
              rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]
                  [static_cast<std::size_t>(j)];
        std::size_t idx = encode_tuple(column, d);
        positions.push_back(idx);
        mx = std::max(mx, free_rank[idx]);
      }
      buckets[mx].push_back({std::move(positions), &R});
    } while (next_odometer(pick, static_cast<int>(rows.size())));
  }

  auto bucket_passes = [&](std::size_t b) {
    Tuple image;
    for (const Check& c : buckets[b]) {
      image.clear();
      for (std::size_t p : c.positions) image.push_back(table[p]);
      if (!c.relation->contains(image)) return false;
    }
    return true;
  };

  if (!bucket_passes(0)) return std::nullopt;

  std::optional<GeneralOperation> found;
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == num_free) {
      found = GeneralOperation{d, n, table};
      return true;
    }
    std::size_t pos = free_positions[k];
    for (Label a = 0; a < d; ++a) {
      table[pos] = a;
      if (bucket_passes(k + 1) && self(self, k + 1)) return true;
    }
    table[pos] = -1;
    return false;
  };
  rec(rec, 0);
  return found;
}

Rational dist(const Multiset& a, const Multiset& b) {
  if (a.counts.size() != b.counts.size() || a.size() != b.size())
    throw std::invalid_argument("dist requires multisets of equal size over one domain");
  int mx = 0;
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    mx = std::max(mx, std::abs(a.counts[i] - b.counts[i]));
  return Rational(mx, a.size());
}

Rational lipschitz_constant(const FractionalOperation& phi, std::size_t cap) {
  phi.validate();
  const MultisetSpace& space = *phi.support.front().first.space;
  for (const auto& [op, w] : phi.support)
    if (op.space->size() != space.size() || op.table.size() != space.size())
      throw std::invalid_argument("support operations disagree on Delta_n");
  if (space.size() > cap / space.size())
    throw CapExceededError("|Delta_n|^2 = " + std::to_string(space.size()) + "^2 exceeds cap " +
                           std::to_string(cap));
  Rational best(0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      Rational pr(0);
      for (const auto& [op, w] : phi.support)
        if (op.table[i] != op.table[j]) pr += w;
      if (pr == 0) continue;
      Rational ratio = pr / dist(space.at(i), space.at(j));
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

Instance universal_instance(const Language& language, int n, std::size_t cap) {
  MultisetSpace space(language.domain().size, n, cap);
  std::vector<Payload> payloads;
  for (const Payload& member : language.members())
    payloads.emplace_back(payload_zero_relation(member));

  std::vector<Constraint> constraints;
  for (std::size_t mi = 0; mi < payloads.size(); ++mi) {
    const Relation& R = std::get<Relation>(payloads[mi]);
    const int r = R.arity();
    product_checked(space.size(), r, cap, "|Delta_n|^r universal constraints");
    std::vector<int> scope_idx(static_cast<std::size_t>(r), 0);
    do {
      std::vector<std::vector<Rational>> marginals;
      std::vector<int> scope;
      for (int j = 0; j < r; ++j) {
        marginals.push_back(space.distribution(static_cast<std::size_t>(scope_idx[static_cast<std::size_t>(j)])));
        scope.push_back(scope_idx[static_cast<std::size_t>(j)]);
      }
      Rational w = Rational(1) - loss(marginals, R).value;
      constraints.push_back({std::move(scope), static_cast<int>(mi), std::move(w), false});
    } while (next_odometer(scope_idx, static_cast<int>(space.size())));
  }
  return Instance(static_cast<int>(space.size()), language.domain(), std::move(payloads),
                  std::move(constraints), InstanceKind::Crisp, /*allow_zero_weight=*/true);
}

CBoundResult min_c_bound(const Language& language, int n, std::size_t assignment_cap,
                         std::size_t cap) {
  auto space = std::make_shared<MultisetSpace>(language.domain().size, n, cap);
  Instance univ = universal_instance(language, n, cap);
  const int d = language.domain().size;
  const std::size_t vars = space->size();
  const std::size_t num_assignments =
      product_checked(static_cast<std::size_t>(d), static_cast<int>(vars), assignment_cap,
                      "|A|^|Delta_n| assignments");

  // decode assignment index -> table Delta_n -> A
  auto assignment_table = [&](std::size_t g) {
    return decode_tuple(g, static_cast<int>(vars), d);
  };

  LinearProgram lp;
  lp.num_vars = static_cast<int>(num_assignments + 1);  // x_g ..., c
  const std::size_t c_col = num_assignments;
  lp.objective.assign(num_assignments + 1, Rational(0));
  lp.objective[c_col] = 1;

  {
    std::vector<Rational> row(num_assignments + 1, Rational(0));
    for (std::size_t g = 0; g < num_assignments; ++g) row[g] = 1;
    lp.add_row(std::move(row), Cmp::Eq, Rational(1));
  }

  std::vector<Tuple> tables;
  tables.reserve(num_assignments);
  for (std::size_t g = 0; g < num_assignments; ++g) tables.push_back(assignment_table(g));

  for (const Constraint& c : univ.constraints()) {
    const Relation& R = std::get<Relation>(univ.payload_of(c));
    Rational loss_c = Rational(1) - c.weight;
    std::vector<Rational> row(num_assignments + 1, Rational(0));
    Tuple image(c.scope.size());
    for (std::size_t g = 0; g < num_assignments; ++g) {
      for (std::size_t j = 0; j < c.scope.size(); ++j)
        image[j] = tables[g][static_cast<std::size_t>(c.scope[j])];
      if (!R.contains(image)) row[g] = 1;
    }
    row[c_col] = -loss_c;
    lp.add_row(std::move(row), Cmp::Le, Rational(0));
  }

  LPOutcome out = simplex_solve(lp);
  CBoundResult result;
  if (out.status == LPStatus::Infeasible) {
    result.feasible = false;
    return result;
  }
  if (out.status != LPStatus::Optimal) throw std::logic_error("c-bound LP cannot be unbounded");
  result.feasible = true;
  result.c = out.value;
  for (std::size_t g = 0; g < num_assignments; ++g)
    if (out.point[g] > 0)
      result.support.support.push_back({SymmetricOperation{space, tables[g]}, out.point[g]});
  return result;
}

Relation pp_evaluate(const PPFormula& formula, const Language& language, std::size_t cap) {
  const int d = language.domain().size;
  const int k = formula.num_free;
  const int l = formula.num_bound;
  if (k < 1) throw std::invalid_argument("pp formula needs at least one free variable");
  if (l < 0) throw std::invalid_argument("negative bound variable count");

  std::vector<Relation> atom_relations;
  for (const PPAtom& atom : formula.atoms) {
    if (atom.member_index == -1) {
      if (atom.vars.size() != 2) throw std::invalid_argument("equality atom must be binary");
      atom_relations.push_back(Relation::equality(d));
    } else {
      if (atom.member_index < 0 ||
          atom.member_index >= static_cast<int>(language.members().size()))
        throw std::invalid_argument("pp atom references unknown language member");
      atom_relations.push_back(
          payload_zero_relation(language.members()[static_cast<std::size_t>(atom.member_index)]));
    }
    const Relation& R = atom_relations.back();
    if (static_cast<int>(atom.vars.size()) != R.arity())
      throw std::invalid_argument("pp atom arity mismatch");
    for (int v : atom.vars)
      if (v < 0 || v >= k + l) throw std::invalid_argument("pp atom variable out of range");
  }

  product_checked(static_cast<std::size_t>(d), k + l, cap, "|A|^(k+l) pp evaluation");
  std::vector<int> values(static_cast<std::size_t>(k + l), 0);
  std::set<Tuple> free_tuples;
  do {
    bool ok = true;
    for (std::size_t ai = 0; ai < formula.atoms.size() && ok; ++ai) {
      Tuple t;
      for (int v : formula.atoms[ai].vars) t.push_back(values[static_cast<std::size_t>(v)]);
      ok = atom_relations[ai].contains(t);
    }
    if (ok) free_tuples.insert(Tuple(values.begin(), values.begin() + k));
  } while (next_odometer(values, d));

  return Relation(d, k, std::vector<Tuple>(free_tuples.begin(), free_tuples.end()));
}

bool check_nu_gadget(const Relation& R, Label a, Label b) {
  if (a == b) throw std::invalid_argument("check_nu_gadget requires a != b");
  if (a < 0 || a >= R.domain_size() || b < 0 || b >= R.domain_size())
    throw std::invalid_argument("labels out of domain");
  const int k = R.arity();
  std::vector<int> bits(static_cast<std::size_t>(k), 0);
  do {
    Tuple t;
    bool all_a = true;
    for (int bit : bits) {
      t.push_back(bit == 0 ? a : b);
      if (bit != 0) all_a = false;
    }
    if (R.contains(t) == all_a) return false;
  } while (next_odometer(bits, 2));
  return true;
}

}  // namespace csplab
