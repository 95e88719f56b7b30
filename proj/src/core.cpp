#include "csplab/core.hpp"

#include <algorithm>
#include <set>

namespace csplab {

Domain::Domain(int s) : size(s) {
  if (s < 1) throw std::invalid_argument("domain size must be >= 1");
}

std::size_t encode_tuple(const Tuple& t, int domain_size) {
  std::size_t idx = 0;
  for (Label a : t) idx = idx * static_cast<std::size_t>(domain_size) + static_cast<std::size_t>(a);
  return idx;
}

Tuple decode_tuple(std::size_t index, int arity, int domain_size) {
  Tuple t(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Label>(index % static_cast<std::size_t>(domain_size));
    index /= static_cast<std::size_t>(domain_size);
  }
  return t;
}

std::size_t power_checked(int base, int exp, std::size_t cap) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / static_cast<std::size_t>(base))
      throw CapExceededError("table of size " + std::to_string(base) + "^" + std::to_string(exp) +
                             " exceeds cap " + std::to_string(cap));
    r *= static_cast<std::size_t>(base);
  }
  return r;
}

Relation::Relation(int domain_size, int arity, std::vector<Tuple> tuples)
    : domain_size_(domain_size), arity_(arity), tuples_(std::move(tuples)) {
  if (domain_size_ < 1) throw std::invalid_argument("relation domain size must be >= 1");
  if (arity_ < 1) throw std::invalid_argument("relation arity must be >= 1");
  std::size_t table = power_checked(domain_size_, arity_, 100'000'000);
  member_.assign(table, false);
  for (const Tuple& t : tuples_) {
    if (static_cast<int>(t.size()) != arity_)
      throw std::invalid_argument("relation tuple length does not match arity");
    for (Label a : t)
      if (a < 0 || a >= domain_size_)
        throw std::invalid_argument("relation tuple label out of range");
    member_[encode_tuple(t, domain_size_)] = true;
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool Relation::contains(const Tuple& t) const {
  return member_[encode_tuple(t, domain_size_)];
}

bool Relation::operator==(const Relation& other) const {
  return domain_size_ == other.domain_size_ && arity_ == other.arity_ && tuples_ == other.tuples_;
}

Relation Relation::equality(int domain_size) {
  std::vector<Tuple> ts;
  for (Label a = 0; a < domain_size; ++a) ts.push_back({a, a});
  return Relation(domain_size, 2, std::move(ts));
}

Relation Relation::singleton(int domain_size, Label a) {
  return Relation(domain_size, 1, {{a}});
}

Relation Relation::full(int domain_size, int arity) {
  std::size_t table = power_checked(domain_size, arity, 100'000'000);
  std::vector<Tuple> ts;
  ts.reserve(table);
  for (std::size_t i = 0; i < table; ++i) ts.push_back(decode_tuple(i, arity, domain_size));
  return Relation(domain_size, arity, std::move(ts));
}

CostFunction::CostFunction(int domain_size, int arity, std::vector<Rational> table)
    : domain_size_(domain_size), arity_(arity), table_(std::move(table)) {
  if (domain_size_ < 1) throw std::invalid_argument("cost function domain size must be >= 1");
  if (arity_ < 1) throw std::invalid_argument("cost function arity must be >= 1");
  std::size_t want = power_checked(domain_size_, arity_, 100'000'000);
  if (table_.size() != want)
    throw std::invalid_argument("cost function table must be total on A^arity");
  for (const Rational& v : table_)
    if (v < 0 || v > 1)
      throw std::invalid_argument("cost function values must lie in [0,1]");
}

const Rational& CostFunction::value(const Tuple& t) const {
  return table_[encode_tuple(t, domain_size_)];
}

Relation CostFunction::zero_set() const {
  std::vector<Tuple> ts;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] == 0) ts.push_back(decode_tuple(i, arity_, domain_size_));
  return Relation(domain_size_, arity_, std::move(ts));
}

bool CostFunction::operator==(const CostFunction& other) const {
  return domain_size_ == other.domain_size_ && arity_ == other.arity_ && table_ == other.table_;
}

int payload_arity(const Payload& p) {
  return std::visit([](const auto& x) { return x.arity(); }, p);
}

int payload_domain_size(const Payload& p) {
  return std::visit([](const auto& x) { return x.domain_size(); }, p);
}

Rational payload_cost(const Payload& p, const Tuple& t) {
  if (const auto* r = std::get_if<Relation>(&p)) return r->contains(t) ? Rational(0) : Rational(1);
  return std::get<CostFunction>(p).value(t);
}

Relation payload_zero_relation(const Payload& p) {
  if (const auto* r = std::get_if<Relation>(&p)) return *r;
  return std::get<CostFunction>(p).zero_set();
}

Language::Language(Domain domain, std::vector<Payload> members)
    : domain_(domain), members_(std::move(members)) {
  max_arity_ = 0;
  for (const Payload& m : members_) {
    if (payload_domain_size(m) != domain_.size)
      throw std::invalid_argument("language member domain size mismatch");
    max_arity_ = std::max(max_arity_, payload_arity(m));
  }
  Relation eq = Relation::equality(domain_.size);
  has_equality_ = false;
  for (const Payload& m : members_)
    if (const auto* r = std::get_if<Relation>(&m); r && *r == eq) has_equality_ = true;
  has_singletons_ = true;
  for (Label a = 0; a < domain_.size; ++a) {
    Relation s = Relation::singleton(domain_.size, a);
    bool found = false;
    for (const Payload& m : members_)
      if (const auto* r = std::get_if<Relation>(&m); r && *r == s) found = true;
    if (!found) {
      has_singletons_ = false;
      break;
    }
  }
}

std::string kind_to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Crisp: return "crisp";
    case InstanceKind::Valued: return "valued";
    case InstanceKind::Mixed: return "mixed";
  }
  return "crisp";
}

InstanceKind kind_from_string(const std::string& s) {
  if (s == "crisp") return InstanceKind::Crisp;
  if (s == "valued") return InstanceKind::Valued;
  if (s == "mixed") return InstanceKind::Mixed;
  throw ParseError("unknown instance kind: " + s);
}

Instance::Instance(int num_vars, Domain domain, std::vector<Payload> payloads,
                   std::vector<Constraint> constraints, InstanceKind kind,
                   bool allow_zero_weight)
    : num_vars_(num_vars),
      domain_(domain),
      payloads_(std::move(payloads)),
      constraints_(std::move(constraints)),
      kind_(kind),
      allow_zero_weight_(allow_zero_weight) {
  if (num_vars_ < 0) throw std::invalid_argument("num_vars must be >= 0");
  for (const Payload& p : payloads_)
    if (payload_domain_size(p) != domain_.size)
      throw std::invalid_argument("payload domain size mismatch");
  for (const Constraint& c : constraints_) {
    if (c.payload_id < 0 || c.payload_id >= static_cast<int>(payloads_.size()))
      throw std::invalid_argument("constraint payload_id out of range");
    const Payload& p = payloads_[static_cast<std::size_t>(c.payload_id)];
    if (static_cast<int>(c.scope.size()) != payload_arity(p))
      throw std::invalid_argument("constraint scope length does not match payload arity");
    for (int v : c.scope)
      if (v < 0 || v >= num_vars_) throw std::invalid_argument("constraint scope variable out of range");
    if (c.weight < 0 || (c.weight == 0 && !allow_zero_weight_))
      throw std::invalid_argument("constraint weight must be strictly positive");
    if (c.hard && !std::holds_alternative<Relation>(p))
      throw std::invalid_argument("hard constraints must carry a relation payload");
    if (kind_ == InstanceKind::Crisp) {
      if (c.hard) throw std::invalid_argument("crisp instances admit no hard constraints");
      if (!std::holds_alternative<Relation>(p))
        throw std::invalid_argument("crisp instances admit only relation payloads");
    }
    if (kind_ == InstanceKind::Valued) {
      if (c.hard) throw std::invalid_argument("valued instances admit no hard constraints");
      if (!std::holds_alternative<CostFunction>(p))
        throw std::invalid_argument("valued instances admit only cost function payloads");
    }
  }
}

int Instance::max_constraint_arity() const {
  int k = 0;
  for (const Constraint& c : constraints_) k = std::max(k, static_cast<int>(c.scope.size()));
  return k;
}

void validate_assignment(const Instance& instance, const Assignment& s) {
  if (static_cast<int>(s.values.size()) != instance.num_vars())
    throw std::invalid_argument("assignment length does not match num_vars");
  for (Label a : s.values)
    if (!instance.domain().contains(a)) throw std::invalid_argument("assignment label out of range");
}

namespace {

Tuple scope_tuple(const Constraint& c, const Assignment& s) {
  Tuple t(c.scope.size());
  for (std::size_t i = 0; i < c.scope.size(); ++i)
    t[i] = s.values[static_cast<std::size_t>(c.scope[i])];
  return t;
}

}  // namespace

EvalResult evaluate(const Instance& instance, const Assignment& s) {
  validate_assignment(instance, s);
  EvalResult r{Rational(0), 0};
  for (const Constraint& c : instance.constraints()) {
    Tuple t = scope_tuple(c, s);
    if (c.hard) {
      if (!std::get<Relation>(instance.payload_of(c)).contains(t)) ++r.hard_violations;
      continue;
    }
    r.value += c.weight * payload_cost(instance.payload_of(c), t);
  }
  return r;
}

Rational evaluate_strict(const Instance& instance, const Assignment& s) {
  EvalResult r = evaluate(instance, s);
  if (r.hard_violations > 0)
    throw HardViolationError("assignment violates " + std::to_string(r.hard_violations) +
                             " hard constraint(s)");
  return r.value;
}

BruteForceResult brute_force_opt(const Instance& instance, std::size_t cap) {
  std::size_t space = power_checked(instance.domain().size, instance.num_vars(), cap);
  Assignment s{Tuple(static_cast<std::size_t>(instance.num_vars()), 0)};
  std::optional<BruteForceResult> best;
  for (std::size_t i = 0; i < space; ++i) {
    EvalResult r = evaluate(instance, s);
    if (r.hard_violations == 0 && (!best || r.value < best->value)) best = {r.value, s};
    // odometer increment
    for (int v = instance.num_vars() - 1; v >= 0; --v) {
      Label& x = s.values[static_cast<std::size_t>(v)];
      if (++x < instance.domain().size) break;
      x = 0;
    }
  }
  if (!best) throw InfeasibleError("no assignment satisfies the hard constraints");
  return *best;
}

CostFunction crisp_to_valued(const Relation& relation) {
  std::size_t table = power_checked(relation.domain_size(), relation.arity(), 100'000'000);
  std::vector<Rational> values(table, Rational(1));
  for (std::size_t i = 0; i < table; ++i)
    if (relation.contains_index(i)) values[i] = 0;
  return CostFunction(relation.domain_size(), relation.arity(), std::move(values));
}

}  // namespace csplab
