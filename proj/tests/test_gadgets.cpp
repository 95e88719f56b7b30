#include <doctest.h>

#include <algorithm>

#include "csplab/blp.hpp"
#include "csplab/gadgets.hpp"
#include "csplab/json_io.hpp"
#include "testutil.hpp"

using namespace csplab;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

Relation or3() {
  std::vector<Tuple> tuples;
  for (std::size_t i = 1; i < 8; ++i) tuples.push_back(decode_tuple(i, 3, 2));
  return Relation(2, 3, tuples);
}

// independent maximum-independent-set oracle
int max_independent_set(const Hypergraph& h) {
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << h.num_vertices); ++mask) {
    bool independent = true;
    for (const auto& e : h.edges) {
      bool inside = true;
      for (int v : e) inside = inside && ((mask >> v) & 1);
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("preset hornsat(3): unit clauses and the 3-literal Horn clause") {
  Language horn = preset_language("hornsat", 3);
  CHECK(horn.members().size() == 6);
  CHECK(horn.max_arity() == 3);
  bool has_zero = false, has_one = false, has_impl3 = false;
  Relation impl3(2, 3, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                        {1, 0, 0}, {1, 0, 1}, {1, 1, 1}});  // not-x or not-y or z
  for (const Payload& m : horn.members()) {
    const Relation& r = std::get<Relation>(m);
    if (r == Relation::singleton(2, 0)) has_zero = true;
    if (r == Relation::singleton(2, 1)) has_one = true;
    if (r == impl3) has_impl3 = true;
  }
  CHECK(has_zero);
  CHECK(has_one);
  CHECK(has_impl3);
}

TEST_CASE("preset r_plus_minus: |R+| = 10 by exhaustion") {
  Language rpm = preset_language("r_plus_minus");
  REQUIRE(rpm.members().size() == 2);
  // count triples over {-1,0,+1} with sum >= 1 directly
  int count = 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c)
        if (a + b + c >= 1) ++count;
  REQUIRE(count == 10);
  CHECK(std::get<Relation>(rpm.members()[0]).size() == 10);
  CHECK(std::get<Relation>(rpm.members()[1]).size() == 10);
}

TEST_CASE("preset min_uncut is the bare disequality") {
  Language mu = preset_language("min_uncut");
  CHECK(mu.members().size() == 1);
  CHECK_FALSE(mu.has_equality());
  CHECK(std::get<Relation>(mu.members()[0]) == Relation(2, 2, {{0, 1}, {1, 0}}));
}

TEST_CASE("preset ihbs: the Example-1 polymorphism facts") {
  Language ihbs3 = preset_language("ihbs", 3);
  GeneralOperation jelly{2, 3, std::vector<Label>(8)};
  for (std::size_t i = 0; i < 8; ++i) {
    Tuple t = decode_tuple(i, 3, 2);
    jelly.table[i] = t[0] & (t[1] | t[2]);
  }
  CHECK(is_polymorphism(jelly, ihbs3));
  GeneralOperation max2{2, 2, {0, 1, 1, 1}};
  CHECK_FALSE(is_polymorphism(max2, ihbs3));
}

TEST_CASE("preset rejects unknown names and bad parameters") {
  CHECK_THROWS_AS(preset_language("no_such_language"), std::invalid_argument);
  CHECK_THROWS_AS(preset_language("ihbs", 1), std::invalid_argument);
  CHECK_THROWS_AS(preset_language("powerset_lattice", 9), std::invalid_argument);
}

TEST_CASE("hypergraph gadget: single 3-edge gives optimum 1/3") {
  Hypergraph h{3, 3, {{0, 1, 2}}};
  Instance gadget = hypergraph_gadget(h, or3(), 0, 1);
  auto opt = brute_force_opt(gadget);
  CHECK(opt.value == q(1, 3));
  CHECK(max_independent_set(h) == 2);
}

TEST_CASE("hypergraph gadget: edgeless graph has optimum 0") {
  Hypergraph h{4, 3, {}};
  Instance gadget = hypergraph_gadget(h, or3(), 0, 1);
  CHECK(brute_force_opt(gadget).value == q(0));
}

TEST_CASE("hypergraph gadget: complete 3-uniform on 4 vertices") {
  Hypergraph h{4, 3, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  REQUIRE(max_independent_set(h) == 2);
  Instance gadget = hypergraph_gadget(h, or3(), 0, 1);
  CHECK(brute_force_opt(gadget).value == q(1, 2));
}

TEST_CASE("hypergraph gadget: optimum equals 1 - m/|V| on a random suite") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    int vertices = 3 + static_cast<int>(seed % 4);
    Hypergraph h = random_hypergraph(vertices, 3, 1 + static_cast<int>(seed % 5), 900 + seed);
    Instance gadget = hypergraph_gadget(h, or3(), 0, 1);
    int m = max_independent_set(h);
    CAPTURE(seed);
    CHECK(brute_force_opt(gadget).value == q(1) - Rational(m, vertices));
  }
}

TEST_CASE("hypergraph gadget: hard-feasible assignments induce independent sets") {
  Hypergraph h{5, 3, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}}};
  Instance gadget = hypergraph_gadget(h, or3(), 0, 1);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    Assignment s;
    for (int v = 0; v < 5; ++v) s.values.push_back((mask >> v) & 1 ? 0 : 1);
    if (evaluate(gadget, s).hard_violations == 0) {
      // X = {v : s(v) = a} with a = 0 is independent
      for (const auto& e : h.edges) {
        bool inside = true;
        for (int v : e) inside = inside && s.values[static_cast<std::size_t>(v)] == 0;
        CHECK_FALSE(inside);
      }
    }
  }
}

TEST_CASE("hypergraph gadget through a pp formula with fresh bound variables") {
  // define OR3 by a dummy existential: exists y . OR3(x1,x2,x3) and y = y
  Language lang(Domain(2), {or3(), Relation::equality(2)});
  PPFormula f{3, 1, {{0, {0, 1, 2}}, {1, {3, 3}}}};
  Hypergraph h{4, 3, {{0, 1, 2}, {1, 2, 3}}};
  Instance gadget = hypergraph_gadget(h, or3(), 0, 1, f, lang);
  // one fresh variable per edge on top of the 4 vertices
  CHECK(gadget.num_vars() == 6);
  int m = max_independent_set(h);
  CHECK(brute_force_opt(gadget).value == q(1) - Rational(m, 4));
}

TEST_CASE("hypergraph gadget validates its preconditions") {
  Hypergraph h{3, 3, {{0, 1, 2}}};
  CHECK_THROWS_AS(hypergraph_gadget(h, Relation::equality(2), 0, 1), std::invalid_argument);
  Hypergraph wrong_arity{3, 2, {{0, 1}}};
  CHECK_THROWS_AS(hypergraph_gadget(wrong_arity, or3(), 0, 1), std::invalid_argument);
}

TEST_CASE("random_instance: empty constraint list gives optimum 0") {
  Language mu = preset_language("min_uncut");
  Instance inst = random_instance(mu, 3, 0, q(1, 2), q(1), 7);
  CHECK(brute_force_opt(inst).value == q(0));
}

TEST_CASE("random_instance: seed repetition reproduces the instance bit-exactly") {
  Language lang = preset_language("r_plus_minus");
  Instance a = random_instance(lang, 6, 9, q(1, 2), q(2), 4242);
  Instance b = random_instance(lang, 6, 9, q(1, 2), q(2), 4242);
  CHECK(dump_canonical(instance_to_json(a)) == dump_canonical(instance_to_json(b)));
  Instance c = random_instance(lang, 6, 9, q(1, 2), q(2), 4243);
  CHECK(dump_canonical(instance_to_json(a)) != dump_canonical(instance_to_json(c)));
}

TEST_CASE("random_instance regression fixture: min_uncut seed 42") {
  // frozen at first run: OPT and BLP optimum of this exact instance
  Language mu = preset_language("min_uncut");
  Instance inst = random_instance(mu, 6, 9, q(1, 2), q(2), 42);
  CHECK(brute_force_opt(inst).value == q(29, 16));
  LPSolution sol = solve_blp(inst);
  CHECK(sol.blp_value == q(0));
  CHECK(sol.denominator == 2);
}

TEST_CASE("random_satisfiable_instance really is satisfiable") {
  for (const char* name : {"powerset_lattice", "r_plus_minus", "hornsat"}) {
    Language lang = preset_language(name);
    for (std::uint64_t seed : {1u, 2u}) {
      Instance inst = random_satisfiable_instance(lang, 5, 8, seed);
      CHECK(brute_force_opt(inst).value == q(0));
    }
  }
}

TEST_CASE("random_hypergraph: determinism and validity") {
  Hypergraph a = random_hypergraph(6, 3, 5, 11);
  Hypergraph b = random_hypergraph(6, 3, 5, 11);
  CHECK(a.edges == b.edges);
  CHECK(a.edges.size() == 5);
  CHECK_NOTHROW(a.validate());
  // requesting more edges than exist clamps at the complete hypergraph
  Hypergraph full = random_hypergraph(4, 3, 100, 3);
  CHECK(full.edges.size() == 4);
}

TEST_CASE("hypergraph JSON round-trips") {
  Hypergraph h = random_hypergraph(5, 3, 4, 13);
  std::string once = dump_canonical(hypergraph_to_json(h));
  std::string twice = dump_canonical(hypergraph_to_json(hypergraph_from_json(Json::parse(once))));
  CHECK(once == twice);
}
