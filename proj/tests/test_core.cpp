#include <doctest.h>

#include <random>

#include "csplab/core.hpp"
#include "csplab/gadgets.hpp"
#include "csplab/json_io.hpp"
#include "testutil.hpp"

using namespace csplab;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

Relation neq2() { return Relation(2, 2, {{0, 1}, {1, 0}}); }

Instance triangle_uncut() {
  std::vector<Payload> payloads{neq2()};
  std::vector<Constraint> cs{
      {{0, 1}, 0, q(1), false}, {{1, 2}, 0, q(1), false}, {{0, 2}, 0, q(1), false}};
  return Instance(3, Domain(2), std::move(payloads), std::move(cs), InstanceKind::Crisp);
}

}  // namespace

TEST_CASE("evaluate: empty instance is the empty sum") {
  Instance inst(2, Domain(2), {}, {}, InstanceKind::Crisp);
  CHECK(evaluate(inst, {{0, 1}}).value == q(0));
}

TEST_CASE("evaluate: disequality constraint") {
  Instance inst(2, Domain(2), {neq2()}, {{{0, 1}, 0, q(1), false}}, InstanceKind::Crisp);
  CHECK(evaluate(inst, {{0, 1}}).value == q(0));
  CHECK(evaluate(inst, {{0, 0}}).value == q(1));
}

TEST_CASE("evaluate: weighted cost function") {
  CostFunction rho(2, 1, {q(0), q(1, 2)});
  Instance inst(1, Domain(2), {rho}, {{{0}, 0, q(2), false}}, InstanceKind::Valued);
  CHECK(evaluate(inst, {{1}}).value == q(1));
  CHECK(evaluate(inst, {{0}}).value == q(0));
}

TEST_CASE("evaluate rejects invalid assignments") {
  Instance inst(2, Domain(2), {neq2()}, {{{0, 1}, 0, q(1), false}}, InstanceKind::Crisp);
  CHECK_THROWS_AS(evaluate(inst, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(inst, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("strict evaluation flags hard violations") {
  Instance inst(2, Domain(2), {neq2(), Relation::equality(2)},
                {{{0, 1}, 0, q(1), true}, {{0, 1}, 1, q(1), false}}, InstanceKind::Mixed);
  Assignment bad{{0, 0}};
  EvalResult r = evaluate(inst, bad);
  CHECK(r.hard_violations == 1);
  CHECK(r.value == q(0));  // the soft equality is satisfied
  CHECK_THROWS_AS(evaluate_strict(inst, bad), HardViolationError);
  CHECK(evaluate_strict(inst, {{0, 1}}) == q(1));
}

TEST_CASE("brute force: satisfiable equality instance") {
  Instance inst(2, Domain(2), {Relation::equality(2)}, {{{0, 1}, 0, q(1), false}},
                InstanceKind::Crisp);
  auto r = brute_force_opt(inst);
  CHECK(r.value == q(0));
  CHECK(evaluate(inst, r.witness).value == q(0));
}

TEST_CASE("brute force: triangle of disequalities") {
  Instance inst = triangle_uncut();
  // independent oracle: walk all 8 assignments by hand
  Rational best(3);
  for (int bits = 0; bits < 8; ++bits) {
    Assignment s{{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1}};
    Rational v = evaluate(inst, s).value;
    if (v < best) best = v;
  }
  REQUIRE(best == q(1));
  CHECK(brute_force_opt(inst).value == q(1));
}

TEST_CASE("brute force: minimum over sampled assignments") {
  std::mt19937_64 rng(7);
  Language lang = preset_language("min_2cnf");
  for (int round = 0; round < 5; ++round) {
    Instance inst = random_instance(lang, 5, 7, q(1, 2), q(2), 100 + round);
    auto opt = brute_force_opt(inst);
    for (int s = 0; s < 20; ++s) {
      Assignment a;
      for (int v = 0; v < 5; ++v)
        a.values.push_back(static_cast<Label>(testutil::bounded(rng, 2)));
      CHECK(opt.value <= evaluate(inst, a).value);
    }
  }
}

TEST_CASE("brute force: cap and infeasibility errors") {
  Instance big(40, Domain(2), {}, {}, InstanceKind::Crisp);
  CHECK_THROWS_AS(brute_force_opt(big, 1000), CapExceededError);

  Relation empty_rel(2, 1, {});
  Instance infeasible(1, Domain(2), {empty_rel}, {{{0}, 0, q(1), true}}, InstanceKind::Mixed);
  CHECK_THROWS_AS(brute_force_opt(infeasible), InfeasibleError);
}

TEST_CASE("crisp_to_valued: characteristic functions") {
  CostFunction eq = crisp_to_valued(Relation::equality(2));
  CHECK(eq.value({0, 0}) == q(0));
  CHECK(eq.value({1, 1}) == q(0));
  CHECK(eq.value({0, 1}) == q(1));
  CHECK(eq.value({1, 0}) == q(1));

  CostFunction full = crisp_to_valued(Relation::full(3, 2));
  for (const Rational& v : full.table()) CHECK(v == q(0));

  CostFunction empty = crisp_to_valued(Relation(2, 1, {}));
  for (const Rational& v : empty.table()) CHECK(v == q(1));
}

TEST_CASE("crisp and valued images agree on every assignment") {
  Language lang = preset_language("hornsat", 3);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Instance crisp = random_instance(lang, 6, 8, q(1, 4), q(3, 2), seed);
    // constraint-wise valued image
    std::vector<Payload> valued_payloads;
    for (const Payload& p : crisp.payloads())
      valued_payloads.emplace_back(crisp_to_valued(std::get<Relation>(p)));
    Instance valued(crisp.num_vars(), crisp.domain(), std::move(valued_payloads),
                    crisp.constraints(), InstanceKind::Valued);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < 30; ++s) {
      Assignment a;
      for (int v = 0; v < crisp.num_vars(); ++v)
        a.values.push_back(static_cast<Label>(testutil::bounded(rng, 2)));
      CHECK(evaluate(crisp, a).value == evaluate(valued, a).value);
    }
  }
}

TEST_CASE("construction enforces the invariants") {
  CHECK_THROWS_AS(Domain(0), std::invalid_argument);
  CHECK_THROWS_AS(Relation(2, 2, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(Relation(2, 1, {{5}}), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction(2, 1, {q(0)}), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction(2, 1, {q(0), q(2)}), std::invalid_argument);

  // zero and negative weights are rejected unless the instance is internal
  CHECK_THROWS_AS(Instance(2, Domain(2), {neq2()}, {{{0, 1}, 0, q(0), false}},
                           InstanceKind::Crisp),
                  std::invalid_argument);
  CHECK_NOTHROW(Instance(2, Domain(2), {neq2()}, {{{0, 1}, 0, q(0), false}}, InstanceKind::Crisp,
                         /*allow_zero_weight=*/true));
  CHECK_THROWS_AS(Instance(2, Domain(2), {neq2()}, {{{0, 3}, 0, q(1), false}},
                           InstanceKind::Crisp),
                  std::invalid_argument);
  // hard constraints need relation payloads, and crisp instances forbid them
  CostFunction rho(2, 1, {q(0), q(1)});
  CHECK_THROWS_AS(Instance(1, Domain(2), {rho}, {{{0}, 0, q(1), true}}, InstanceKind::Mixed),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance(2, Domain(2), {neq2()}, {{{0, 1}, 0, q(1), true}},
                           InstanceKind::Crisp),
                  std::invalid_argument);
}

TEST_CASE("language flags: equality, singletons, max arity") {
  Language plain = preset_language("min_uncut");
  CHECK(plain.max_arity() == 2);
  CHECK_FALSE(plain.has_equality());
  CHECK_FALSE(plain.has_singletons());

  Language flagged =
      preset_language("min_uncut", 0, {.add_equality = true, .add_singletons = true});
  CHECK(flagged.has_equality());
  CHECK(flagged.has_singletons());
}

TEST_CASE("instance JSON round-trips byte-identically") {
  CostFunction rho(2, 2, {q(0), q(1, 3), q(1, 2), q(1)});
  Instance inst(3, Domain(2), {neq2(), rho},
                {{{0, 1}, 0, q(2, 3), false}, {{1, 2}, 1, q(1), false}}, InstanceKind::Mixed);
  std::string once = dump_canonical(instance_to_json(inst));
  Instance parsed = instance_from_json(Json::parse(once));
  std::string twice = dump_canonical(instance_to_json(parsed));
  CHECK(once == twice);

  Language lang = preset_language("r_plus_minus");
  std::string lang_once = dump_canonical(language_to_json(lang));
  std::string lang_twice =
      dump_canonical(language_to_json(language_from_json(Json::parse(lang_once))));
  CHECK(lang_once == lang_twice);
}

TEST_CASE("instance JSON rejects malformed documents") {
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"format":"nope"})")), ParseError);
  auto j = instance_to_json(triangle_uncut());
  j["constraints"][0]["weight"] = "1/0";
  CHECK_THROWS_AS(instance_from_json(j), ParseError);
}
