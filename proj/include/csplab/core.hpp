#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csplab/errors.hpp"
#include "csplab/rational.hpp"

namespace csplab {

using Label = int;
using Tuple = std::vector<Label>;

struct Domain {
  int size = 1;  // labels are 0..size-1

  explicit Domain(int s);
  bool contains(Label a) const { return a >= 0 && a < size; }
};

// Row-major tuple <-> index conversion over a fixed domain size.
std::size_t encode_tuple(const Tuple& t, int domain_size);
Tuple decode_tuple(std::size_t index, int arity, int domain_size);
std::size_t power_checked(int base, int exp, std::size_t cap);

// A k-ary relation, stored with O(1) membership over A^k.
class Relation {
 public:
  Relation(int domain_size, int arity, std::vector<Tuple> tuples);

  int domain_size() const { return domain_size_; }
  int arity() const { return arity_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool contains(const Tuple& t) const;
  bool contains_index(std::size_t idx) const { return member_[idx]; }

  bool operator==(const Relation& other) const;

  static Relation equality(int domain_size);
  static Relation singleton(int domain_size, Label a);
  static Relation full(int domain_size, int arity);

 private:
  int domain_size_;
  int arity_;
  std::vector<Tuple> tuples_;      // sorted lexicographically, duplicate-free
  std::vector<bool> member_;       // indexed by encode_tuple
};

// rho : A^k -> [0,1], total, exact rational values.
class CostFunction {
 public:
  CostFunction(int domain_size, int arity, std::vector<Rational> table);

  int domain_size() const { return domain_size_; }
  int arity() const { return arity_; }
  const std::vector<Rational>& table() const { return table_; }
  const Rational& value(const Tuple& t) const;
  const Rational& value_at(std::size_t idx) const { return table_[idx]; }

  // Zero set {t : rho(t) = 0}.
  Relation zero_set() const;

  bool operator==(const CostFunction& other) const;

 private:
  int domain_size_;
  int arity_;
  std::vector<Rational> table_;  // dense, indexed by encode_tuple
};

using Payload = std::variant<Relation, CostFunction>;

int payload_arity(const Payload& p);
int payload_domain_size(const Payload& p);
// Relation payloads are viewed as 0/1 cost; cost payloads report their table.
Rational payload_cost(const Payload& p, const Tuple& t);
// The relation checked by polymorphism machinery: R itself, or the zero set.
Relation payload_zero_relation(const Payload& p);

class Language {
 public:
  Language(Domain domain, std::vector<Payload> members);

  const Domain& domain() const { return domain_; }
  const std::vector<Payload>& members() const { return members_; }
  int max_arity() const { return max_arity_; }
  bool has_equality() const { return has_equality_; }
  bool has_singletons() const { return has_singletons_; }

 private:
  Domain domain_;
  std::vector<Payload> members_;
  int max_arity_;
  bool has_equality_;
  bool has_singletons_;
};

struct Constraint {
  std::vector<int> scope;
  int payload_id = 0;  // index into Instance payload pool
  Rational weight = 1;
  bool hard = false;
};

enum class InstanceKind { Crisp, Valued, Mixed };

std::string kind_to_string(InstanceKind k);
InstanceKind kind_from_string(const std::string& s);

class Instance {
 public:
  // allow_zero_weight is reserved for internally built universal instances.
  Instance(int num_vars, Domain domain, std::vector<Payload> payloads,
           std::vector<Constraint> constraints, InstanceKind kind,
           bool allow_zero_weight = false);

  int num_vars() const { return num_vars_; }
  const Domain& domain() const { return domain_; }
  const std::vector<Payload>& payloads() const { return payloads_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  InstanceKind kind() const { return kind_; }
  bool allows_zero_weight() const { return allow_zero_weight_; }

  const Payload& payload_of(const Constraint& c) const { return payloads_[c.payload_id]; }
  int max_constraint_arity() const;

 private:
  int num_vars_;
  Domain domain_;
  std::vector<Payload> payloads_;
  std::vector<Constraint> constraints_;
  InstanceKind kind_;
  bool allow_zero_weight_;
};

struct Assignment {
  std::vector<Label> values;
};

void validate_assignment(const Instance& instance, const Assignment& s);

struct EvalResult {
  Rational value;              // weighted soft cost
  std::size_t hard_violations = 0;
};

// Sum over soft constraints of weight * payload cost at the scope tuple.
// Hard violations are counted, not priced.
EvalResult evaluate(const Instance& instance, const Assignment& s);

// Same, but a violated hard constraint throws HardViolationError.
Rational evaluate_strict(const Instance& instance, const Assignment& s);

struct BruteForceResult {
  Rational value;
  Assignment witness;
};

// Exhaustive minimum of evaluate over hard-feasible assignments.
// Throws CapExceededError if |A|^num_vars > cap, InfeasibleError if the
// hard part admits no assignment.
BruteForceResult brute_force_opt(const Instance& instance,
                                 std::size_t cap = 10'000'000);

// Characteristic cost function of R: 0 on R, 1 elsewhere.
CostFunction crisp_to_valued(const Relation& relation);

}  // namespace csplab
