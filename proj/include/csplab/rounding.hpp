#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "csplab/blp.hpp"
#include "csplab/core.hpp"
#include "csplab/polylab.hpp"

namespace csplab {

// Domain labels as subsets of a ground set {0..s-1}, closed under
// intersection and union; meet/join are bitwise and/or on the masks.
class Lattice {
 public:
  Lattice(int ground_size, std::vector<std::uint64_t> masks);

  int ground_size() const { return ground_size_; }
  int domain_size() const { return static_cast<int>(masks_.size()); }
  std::uint64_t mask_of(Label a) const { return masks_[static_cast<std::size_t>(a)]; }
  const std::vector<std::uint64_t>& masks() const { return masks_; }
  // Throws std::domain_error when the mask is not a lattice element.
  Label label_of(std::uint64_t mask) const;

  // All 2^s subsets; label i has mask i.
  static Lattice powerset(int s);

 private:
  int ground_size_;
  std::vector<std::uint64_t> masks_;
  std::unordered_map<std::uint64_t, Label> label_of_;
};

// s(v) = g(multiset of p_v); requires g.arity == solution.denominator.
Assignment round_symmetric(const LPSolution& solution, const SymmetricOperation& g);

// Threshold form of the union-of-h-wise-intersections operation: the label
// whose subset is { j : n * sum_{a : j in a} p_v(a) >= h }.
Label g_hn_apply(const Lattice& lattice, const Integer& h, const std::vector<Rational>& p_v,
                 const Integer& n);

// Materialized table over Delta_n; agrees with g_hn_apply on every multiset.
SymmetricOperation g_hn_table(const Lattice& lattice, int h, int n,
                              std::size_t cap = 10'000'000);

// Three-element scheme over labels {0,1,2} read as {-1,0,+1}: thresholds
// sum = n*(p(+1) - p(-1)) against the band [-h, h]. Requires 0 <= h < n/3.
Label s_hn_apply(const Integer& h, const std::vector<Rational>& p_v, const Integer& n);

SymmetricOperation s_hn_table(int h, int n, std::size_t cap = 10'000'000);

enum class RoundingMode { Sample, Derandomized };

struct RoundingReport {
  Assignment assignment;
  Rational value;      // core evaluation of the assignment (soft part)
  std::size_t hard_violations = 0;
  bool hard_feasible = true;
  Rational blp_value;
  std::string scheme;  // "symmetric" | "lattice" | "three_element"
  std::string mode;    // "sample" | "derandomized"
  Integer h_used;
  std::vector<Integer> h_candidates;  // class representatives (derandomized)
  std::uint64_t seed = 0;
  Integer denominator;
};

// One maximal run of h values producing the same assignment.
struct HClass {
  Integer h_begin, h_end;  // inclusive
  Assignment assignment;
  Rational value;
  std::size_t hard_violations = 0;
};

// The derandomization backbone: the assignment is a step function of h, so
// only class representatives are evaluated. K = 0 means "use the maximum
// constraint arity of the instance".
std::vector<HClass> lattice_round_classes(const Instance& instance, const LPSolution& solution,
                                          const Lattice& lattice, int K = 0);
std::vector<HClass> three_element_round_classes(const Instance& instance,
                                                const LPSolution& solution);

// Sample mode draws h uniformly from ((1 - 1/|A|^K) n, n]; derandomized mode
// scans every class and returns the minimum (hard violations, value),
// smallest h on ties. Requires solution.denominator >= |A|^K.
RoundingReport lattice_round(const Instance& instance, const LPSolution& solution,
                             const Lattice& lattice, RoundingMode mode, std::uint64_t seed,
                             int K = 0);

// Same over h in {0, ..., floor(n/3) - 1} for the three-element domain.
RoundingReport three_element_round(const Instance& instance, const LPSolution& solution,
                                   RoundingMode mode, std::uint64_t seed);

// Uniform fractional operations backing the two schemes.
FractionalOperation make_phi_lattice(const Lattice& lattice, int K, int n,
                                     std::size_t cap = 10'000'000);
FractionalOperation make_phi_three_element(int n, std::size_t cap = 10'000'000);

// Integers h with (1 - 1/M) n < h <= n, M = |A|^K, as [first, last].
std::pair<Integer, Integer> lattice_h_range(int domain_size, int K, const Integer& n);

}  // namespace csplab
