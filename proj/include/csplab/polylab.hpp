#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "csplab/blp.hpp"
#include "csplab/core.hpp"

namespace csplab {

// A size-n multiset over the domain, identified with an element of
// Delta_n(A): the distribution assigning count/n to each label.
struct Multiset {
  std::vector<int> counts;  // per label, >= 0
  int size() const;
};

// Delta_n(A) with a fixed enumeration: count vectors in lexicographic order.
class MultisetSpace {
 public:
  MultisetSpace(int domain_size, int n, std::size_t cap = 10'000'000);

  int domain_size() const { return domain_size_; }
  int n() const { return n_; }
  std::size_t size() const { return elements_.size(); }
  const Multiset& at(std::size_t idx) const { return elements_[idx]; }
  std::size_t index_of(const Multiset& m) const;
  const std::vector<Multiset>& elements() const { return elements_; }

  // The distribution counts/n as exact rationals.
  std::vector<Rational> distribution(std::size_t idx) const;
  // Inverse: requires every p(a) * n integral.
  Multiset from_distribution(const std::vector<Rational>& p) const;

  static std::size_t count(int domain_size, int n, std::size_t cap);

 private:
  int domain_size_;
  int n_;
  std::vector<Multiset> elements_;
  std::map<std::vector<int>, std::size_t> index_;
};

struct GeneralOperation {
  int domain_size = 2;
  int arity = 1;
  std::vector<Label> table;  // indexed by encode_tuple over A^arity

  Label apply(const Tuple& args) const { return table[encode_tuple(args, domain_size)]; }
};

// A symmetric operation, stored as a function Delta_n(A) -> A.
struct SymmetricOperation {
  std::shared_ptr<const MultisetSpace> space;
  std::vector<Label> table;  // indexed by the space's multiset order

  int domain_size() const { return space->domain_size(); }
  int arity() const { return space->n(); }
  Label apply(const Multiset& m) const { return table[space->index_of(m)]; }

  GeneralOperation to_general(std::size_t cap = 10'000'000) const;
};

// Probability distribution over symmetric operations of a common arity.
struct FractionalOperation {
  std::vector<std::pair<SymmetricOperation, Rational>> support;  // weights > 0, sum 1

  void validate() const;
};

struct OperationClass {
  bool idempotent = false;
  bool symmetric = false;
  bool totally_symmetric = false;
  bool nu = false;   // false for arity < 3 by definition
  bool wnu = false;
};

struct PPAtom {
  int member_index = -1;  // index into the language; -1 means equality
  std::vector<int> vars;  // indices into free vars (0..k-1) then bound (k..k+l-1)
};

struct PPFormula {
  int num_free = 1;
  int num_bound = 0;
  std::vector<PPAtom> atoms;
};

// Exhaustive preservation check. Cost functions are checked through their
// zero-set relations. The cap bounds the per-relation combination count.
bool is_polymorphism(const GeneralOperation& op, const Language& language,
                     std::size_t cap = 10'000'000);
bool is_polymorphism(const SymmetricOperation& op, const Language& language,
                     std::size_t cap = 10'000'000);

OperationClass classify_operation(const GeneralOperation& op);

// The complete list of n-ary symmetric operations preserving every member,
// via backtracking over the Delta_n table with preservation pruning.
std::vector<SymmetricOperation> enumerate_symmetric_polymorphisms(const Language& language, int n,
                                                                  std::size_t cap = 10'000'000);

// Backtracking search for an n-ary NU polymorphism (n >= 3); the NU
// identities pin every near-unanimous entry up front.
std::optional<GeneralOperation> find_nu_polymorphism(const Language& language, int n,
                                                     std::size_t cap = 10'000'000);

// max_a |count_a(x) - count_b(x)| / n; sizes must agree.
Rational dist(const Multiset& a, const Multiset& b);

// Least c with Pr[g(a) != g(b)] <= c * dist(a,b) for all multiset pairs.
Rational lipschitz_constant(const FractionalOperation& phi, std::size_t cap = 10'000'000);

// Variables are Delta_n(A); one constraint per (member, marginal tuple) with
// weight 1 - loss. Weight-0 constraints are retained.
Instance universal_instance(const Language& language, int n, std::size_t cap = 10'000'000);

struct CBoundResult {
  bool feasible = false;
  Rational c;                   // minimal c, when feasible
  FractionalOperation support;  // optimal fractional assignment, as operations
};

// Minimal c admitting a c-bounded fractional assignment for the n-th
// universal instance; LP over all assignments G_n (|A|^|Delta_n| of them).
CBoundResult min_c_bound(const Language& language, int n, std::size_t assignment_cap = 1'000'000,
                         std::size_t cap = 10'000'000);

// Exhaustive join + projection of an existentially quantified conjunction.
Relation pp_evaluate(const PPFormula& formula, const Language& language,
                     std::size_t cap = 10'000'000);

// R cap {a,b}^k == {a,b}^k minus the all-a tuple.
bool check_nu_gadget(const Relation& R, Label a, Label b);

}  // namespace csplab
