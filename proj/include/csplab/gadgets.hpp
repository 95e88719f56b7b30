#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csplab/core.hpp"
#include "csplab/polylab.hpp"

namespace csplab {

struct Hypergraph {
  int num_vertices = 0;
  int arity = 2;                        // k-uniform
  std::vector<std::vector<int>> edges;  // k distinct vertices each

  void validate() const;
};

struct PresetOptions {
  bool add_equality = false;
  bool add_singletons = false;
};

// Preset constraint languages:
//   hornsat(k)          Horn clause relations of arity <= k over {0,1}
//   ihbs(k)             negative clauses up to arity k plus all 2-variable clauses
//   min_uncut           the single binary disequality relation
//   min_2cnf            all 2-clause relations over {0,1}
//   r_plus_minus        R+ / R- (triples over {-1,0,+1} summing >= 1 / <= -1;
//                       labels 0,1,2 encode -1,0,+1)
//   powerset_lattice(s) subsets of an s-set: order, disjointness and
//                       element-membership relations (labels are bitmasks)
Language preset_language(const std::string& name, int param = 0, PresetOptions opts = {});

std::vector<std::string> preset_names();

// Mixed instance whose optimum is 1 - m/|V|, m the maximum independent set
// size of H: one hard pp-gadget (or a direct hard R constraint) per edge and
// a soft (v, {a}) constraint of weight 1/|V| per vertex.
Instance hypergraph_gadget(const Hypergraph& h, const Relation& R, Label a, Label b,
                           const std::optional<PPFormula>& pp = std::nullopt,
                           const std::optional<Language>& pp_language = std::nullopt);

// Uniformly random scopes (distinct variables), uniformly random payloads,
// weights sampled in eighths from [weight_lo, weight_hi]. Deterministic per
// seed.
Instance random_instance(const Language& language, int num_vars, int num_constraints,
                         const Rational& weight_lo, const Rational& weight_hi,
                         std::uint64_t seed);

// Same, but constraints are rejection-sampled against a planted assignment,
// so the result is satisfiable (crisp languages only).
Instance random_satisfiable_instance(const Language& language, int num_vars, int num_constraints,
                                     std::uint64_t seed);

// Uniform k-subsets of the vertex set, no duplicate edges. Deterministic.
Hypergraph random_hypergraph(int num_vertices, int arity, int num_edges, std::uint64_t seed);

}  // namespace csplab
