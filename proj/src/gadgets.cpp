#include "csplab/gadgets.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace csplab {

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t count) {
  // unbiased rejection sampling; deterministic across platforms
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % count);
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % count;
  }
}

// Relation of the Horn clause with `negatives` negated variables followed by
// `positives` (0 or 1) positive ones; excluded tuple: negatives all 1 and the
// positive 0.
Relation horn_clause_relation(int negatives, int positives) {
  int r = negatives + positives;
  std::vector<Tuple> tuples;
  for (std::size_t i = 0; i < (std::size_t{1} << r); ++i) {
    Tuple t = decode_tuple(i, r, 2);
    bool excluded = true;
    for (int j = 0; j < negatives; ++j) excluded = excluded && t[static_cast<std::size_t>(j)] == 1;
    for (int j = negatives; j < r; ++j) excluded = excluded && t[static_cast<std::size_t>(j)] == 0;
    if (!excluded) tuples.push_back(t);
  }
  return Relation(2, r, std::move(tuples));
}

Relation clause_relation_2cnf(int negatives) {
  // 2-clause with `negatives` negated variables (first positions)
  std::vector<Tuple> tuples;
  for (std::size_t i = 0; i < 4; ++i) {
    Tuple t = decode_tuple(i, 2, 2);
    bool excluded = true;
    for (int j = 0; j < 2; ++j)
      excluded = excluded && t[static_cast<std::size_t>(j)] == (j < negatives ? 1 : 0);
    if (!excluded) tuples.push_back(t);
  }
  return Relation(2, 2, std::move(tuples));
}

void append_flags(std::vector<Payload>& members, int domain_size, PresetOptions opts) {
  if (opts.add_equality) members.emplace_back(Relation::equality(domain_size));
  if (opts.add_singletons)
    for (Label a = 0; a < domain_size; ++a) members.emplace_back(Relation::singleton(domain_size, a));
}

}  // namespace

void Hypergraph::validate() const {
  if (num_vertices < 0) throw std::invalid_argument("negative vertex count");
  if (arity < 1) throw std::invalid_argument("hypergraph arity must be >= 1");
  for (const auto& e : edges) {
    if (static_cast<int>(e.size()) != arity)
      throw std::invalid_argument("hyperedge size does not match arity");
    std::set<int> distinct(e.begin(), e.end());
    if (static_cast<int>(distinct.size()) != arity)
      throw std::invalid_argument("hyperedge vertices must be distinct");
    for (int v : e)
      if (v < 0 || v >= num_vertices) throw std::invalid_argument("hyperedge vertex out of range");
  }
}

Language preset_language(const std::string& name, int param, PresetOptions opts) {
  if (name == "hornsat") {
    int k = param == 0 ? 3 : param;
    if (k < 1) throw std::invalid_argument("hornsat needs k >= 1");
    std::vector<Payload> members;
    for (int r = 1; r <= k; ++r) {
      members.emplace_back(horn_clause_relation(r, 0));
      members.emplace_back(horn_clause_relation(r - 1, 1));
    }
    append_flags(members, 2, opts);
    return Language(Domain(2), std::move(members));
  }
  if (name == "ihbs") {
    int k = param == 0 ? 3 : param;
    if (k < 2) throw std::invalid_argument("ihbs needs k >= 2");
    std::vector<Payload> members;
    members.emplace_back(horn_clause_relation(1, 0));
    members.emplace_back(horn_clause_relation(0, 1));
    members.emplace_back(horn_clause_relation(2, 0));
    members.emplace_back(horn_clause_relation(1, 1));
    for (int r = 3; r <= k; ++r) members.emplace_back(horn_clause_relation(r, 0));
    append_flags(members, 2, opts);
    return Language(Domain(2), std::move(members));
  }
  if (name == "min_uncut") {
    std::vector<Payload> members;
    members.emplace_back(Relation(2, 2, {{0, 1}, {1, 0}}));
    append_flags(members, 2, opts);
    return Language(Domain(2), std::move(members));
  }
  if (name == "min_2cnf") {
    std::vector<Payload> members;
    for (int neg = 0; neg <= 2; ++neg) members.emplace_back(clause_relation_2cnf(neg));
    append_flags(members, 2, opts);
    return Language(Domain(2), std::move(members));
  }
  if (name == "r_plus_minus") {
    // labels 0,1,2 encode -1,0,+1
    std::vector<Tuple> plus, minus;
    for (std::size_t i = 0; i < 27; ++i) {
      Tuple t = decode_tuple(i, 3, 3);
      int sum = (t[0] - 1) + (t[1] - 1) + (t[2] - 1);
      if (sum >= 1) plus.push_back(t);
      if (sum <= -1) minus.push_back(t);
    }
    std::vector<Payload> members;
    members.emplace_back(Relation(3, 3, std::move(plus)));
    members.emplace_back(Relation(3, 3, std::move(minus)));
    append_flags(members, 3, opts);
    return Language(Domain(3), std::move(members));
  }
  if (name == "powerset_lattice") {
    int s = param == 0 ? 2 : param;
    if (s < 1 || s > 4) throw std::invalid_argument("powerset_lattice needs 1 <= s <= 4");
    int d = 1 << s;
    std::vector<Tuple> order, disjoint;
    for (Label x = 0; x < d; ++x) {
      for (Label y = 0; y < d; ++y) {
        if ((x & ~y) == 0) order.push_back({x, y});
        if ((x & y) == 0) disjoint.push_back({x, y});
      }
    }
    std::vector<Payload> members;
    members.emplace_back(Relation(d, 2, std::move(order)));
    members.emplace_back(Relation(d, 2, std::move(disjoint)));
    for (int j = 0; j < s; ++j) {
      std::vector<Tuple> upset;
      for (Label x = 0; x < d; ++x)
        if (x >> j & 1) upset.push_back({x});
      members.emplace_back(Relation(d, 1, std::move(upset)));
    }
    append_flags(members, d, opts);
    return Language(Domain(d), std::move(members));
  }
  throw std::invalid_argument("unknown preset language: " + name);
}

std::vector<std::string> preset_names() {
  return {"hornsat", "ihbs", "min_uncut", "min_2cnf", "r_plus_minus", "powerset_lattice"};
}

Instance hypergraph_gadget(const Hypergraph& h, const Relation& R, Label a, Label b,
                           const std::optional<PPFormula>& pp,
                           const std::optional<Language>& pp_language) {
  h.validate();
  if (h.num_vertices < 1) throw std::invalid_argument("gadget needs at least one vertex");
  if (!check_nu_gadget(R, a, b))
    throw std::invalid_argument("relation fails the {a,b}^k gadget precondition");
  if (h.arity != R.arity())
    throw std::invalid_argument("hypergraph arity must match the relation arity");
  if (pp.has_value() != pp_language.has_value())
    throw std::invalid_argument("a pp formula needs its language (and vice versa)");
  if (pp) {
    if (pp->num_free != R.arity())
      throw std::invalid_argument("pp formula free arity must match the relation");
    if (!(pp_evaluate(*pp, *pp_language) == R))
      throw std::invalid_argument("pp formula does not define the given relation");
  }

  const int d = R.domain_size();
  std::vector<Payload> payloads;
  std::vector<Constraint> constraints;

  if (!pp) {
    payloads.emplace_back(R);
    for (const auto& edge : h.edges)
      constraints.push_back({edge, 0, Rational(1), /*hard=*/true});
  } else {
    // payload per atom (equality resolved against the pp language's domain)
    std::vector<int> atom_payload;
    for (const PPAtom& atom : pp->atoms) {
      if (atom.member_index == -1)
        payloads.emplace_back(Relation::equality(d));
      else
        payloads.emplace_back(payload_zero_relation(
            pp_language->members()[static_cast<std::size_t>(atom.member_index)]));
      atom_payload.push_back(static_cast<int>(payloads.size()) - 1);
    }
    int fresh = h.num_vertices;
    for (const auto& edge : h.edges) {
      for (std::size_t ai = 0; ai < pp->atoms.size(); ++ai) {
        const PPAtom& atom = pp->atoms[ai];
        std::vector<int> scope;
        for (int v : atom.vars)
          scope.push_back(v < pp->num_free ? edge[static_cast<std::size_t>(v)]
                                           : fresh + (v - pp->num_free));
        constraints.push_back({std::move(scope), atom_payload[ai], Rational(1), /*hard=*/true});
      }
      fresh += pp->num_bound;  // fresh bound variables per hyperedge
    }
  }

  int singleton_payload = static_cast<int>(payloads.size());
  payloads.emplace_back(Relation::singleton(d, a));
  Rational soft_weight(1, h.num_vertices);
  for (int v = 0; v < h.num_vertices; ++v)
    constraints.push_back({{v}, singleton_payload, soft_weight, /*hard=*/false});

  int num_vars = h.num_vertices + (pp ? pp->num_bound * static_cast<int>(h.edges.size()) : 0);
  return Instance(num_vars, Domain(d), std::move(payloads), std::move(constraints),
                  InstanceKind::Mixed);
}

namespace {

std::vector<int> random_scope(std::mt19937_64& rng, int num_vars, int arity) {
  // partial Fisher-Yates: first `arity` entries of a random permutation
  std::vector<int> pool(static_cast<std::size_t>(num_vars));
  for (int i = 0; i < num_vars; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<int> scope;
  for (int i = 0; i < arity; ++i) {
    std::uint64_t j = i + bounded(rng, static_cast<std::uint64_t>(num_vars - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    scope.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return scope;
}

Rational random_weight(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("weight range is empty");
  if (lo == hi) return lo;
  // eighths of the range, never zero when lo >= 0
  std::uint64_t k = 1 + bounded(rng, 8);
  return lo + (hi - lo) * Rational(k, 8);
}

InstanceKind kind_for(const Language& language) {
  bool any_rel = false, any_cost = false;
  for (const Payload& m : language.members()) {
    if (std::holds_alternative<Relation>(m)) any_rel = true;
    else any_cost = true;
  }
  if (any_rel && any_cost) return InstanceKind::Mixed;
  return any_cost ? InstanceKind::Valued : InstanceKind::Crisp;
}

}  // namespace

Instance random_instance(const Language& language, int num_vars, int num_constraints,
                         const Rational& weight_lo, const Rational& weight_hi,
                         std::uint64_t seed) {
  if (num_vars < language.max_arity())
    throw std::invalid_argument("num_vars must be at least the language's maximum arity");
  if (weight_lo <= 0) throw std::invalid_argument("weights must stay strictly positive");
  std::mt19937_64 rng(seed);
  std::vector<Payload> payloads = language.members();
  std::vector<Constraint> constraints;
  for (int i = 0; i < num_constraints; ++i) {
    int pid = static_cast<int>(bounded(rng, payloads.size()));
    int arity = payload_arity(payloads[static_cast<std::size_t>(pid)]);
    constraints.push_back({random_scope(rng, num_vars, arity), pid,
                           random_weight(rng, weight_lo, weight_hi), false});
  }
  return Instance(num_vars, language.domain(), std::move(payloads), std::move(constraints),
                  kind_for(language));
}

Instance random_satisfiable_instance(const Language& language, int num_vars, int num_constraints,
                                     std::uint64_t seed) {
  for (const Payload& m : language.members())
    if (!std::holds_alternative<Relation>(m))
      throw std::invalid_argument("planted instances need a crisp language");
  if (num_vars < language.max_arity())
    throw std::invalid_argument("num_vars must be at least the language's maximum arity");
  std::mt19937_64 rng(seed);

  Assignment planted;
  for (int v = 0; v < num_vars; ++v)
    planted.values.push_back(static_cast<Label>(bounded(rng, language.domain().size)));

  std::vector<Payload> payloads = language.members();
  std::vector<Constraint> constraints;
  for (int i = 0; i < num_constraints; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000)
        throw std::runtime_error("could not plant a satisfiable constraint; language too sparse");
      int pid = static_cast<int>(bounded(rng, payloads.size()));
      const Relation& R = std::get<Relation>(payloads[static_cast<std::size_t>(pid)]);
      std::vector<int> scope = random_scope(rng, num_vars, R.arity());
      Tuple t;
      for (int v : scope) t.push_back(planted.values[static_cast<std::size_t>(v)]);
      if (!R.contains(t)) continue;
      constraints.push_back(
          {std::move(scope), pid, random_weight(rng, Rational(1, 8), Rational(1)), false});
      break;
    }
  }
  return Instance(num_vars, language.domain(), std::move(payloads), std::move(constraints),
                  InstanceKind::Crisp);
}

Hypergraph random_hypergraph(int num_vertices, int arity, int num_edges, std::uint64_t seed) {
  if (arity > num_vertices) throw std::invalid_argument("arity exceeds vertex count");
  std::mt19937_64 rng(seed);
  std::set<std::vector<int>> edges;
  std::size_t max_edges = 1;
  for (int i = 0; i < arity; ++i)
    max_edges = max_edges * static_cast<std::size_t>(num_vertices - i) / static_cast<std::size_t>(i + 1);
  std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(num_edges), max_edges);
  while (edges.size() < want) {
    std::vector<int> e = random_scope(rng, num_vertices, arity);
    std::sort(e.begin(), e.end());
    edges.insert(e);
  }
  Hypergraph h{num_vertices, arity, std::vector<std::vector<int>>(edges.begin(), edges.end())};
  h.validate();
  return h;
}

}  // namespace csplab
