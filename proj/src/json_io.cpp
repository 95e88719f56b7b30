#include "csplab/json_io.hpp"

#include <fstream>

namespace csplab {

namespace {

void expect_format(const Json& j, const std::string& format) {
  if (!j.is_object()) throw ParseError("expected a JSON object for " + format);
  if (j.value("format", std::string()) != format)
    throw ParseError("missing or wrong \"format\" marker (want " + format + ")");
}

Json payload_to_json(const Payload& p) {
  Json j;
  if (const auto* r = std::get_if<Relation>(&p)) {
    j["type"] = "relation";
    j["arity"] = r->arity();
    Json tuples = Json::array();
    for (const Tuple& t : r->tuples()) tuples.push_back(t);
    j["tuples"] = std::move(tuples);
  } else {
    const auto& cf = std::get<CostFunction>(p);
    j["type"] = "cost_function";
    j["arity"] = cf.arity();
    Json table = Json::array();
    for (std::size_t i = 0; i < cf.table().size(); ++i) {
      Json entry;
      entry["tuple"] = decode_tuple(i, cf.arity(), cf.domain_size());
      entry["value"] = rational_to_string(cf.table()[i]);
      table.push_back(std::move(entry));
    }
    j["table"] = std::move(table);
  }
  return j;
}

Payload payload_from_json(const Json& j, int domain_size) {
  try {
    std::string type = j.at("type").get<std::string>();
    int arity = j.at("arity").get<int>();
    if (type == "relation") {
      std::vector<Tuple> tuples;
      for (const Json& t : j.at("tuples")) tuples.push_back(t.get<Tuple>());
      return Relation(domain_size, arity, std::move(tuples));
    }
    if (type == "cost_function") {
      std::size_t total = power_checked(domain_size, arity, 100'000'000);
      std::vector<Rational> table(total, Rational(-1));
      for (const Json& entry : j.at("table")) {
        Tuple t = entry.at("tuple").get<Tuple>();
        if (static_cast<int>(t.size()) != arity) throw ParseError("cost table tuple arity mismatch");
        table[encode_tuple(t, domain_size)] =
            rational_from_string(entry.at("value").get<std::string>());
      }
      for (const Rational& v : table)
        if (v < 0) throw ParseError("cost function table must be total on A^arity");
      return CostFunction(domain_size, arity, std::move(table));
    }
    throw ParseError("unknown payload type: " + type);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed payload: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid payload: ") + e.what());
  }
}

}  // namespace

Json instance_to_json(const Instance& instance) {
  Json j;
  j["format"] = "csplab-instance";
  j["kind"] = kind_to_string(instance.kind());
  j["num_vars"] = instance.num_vars();
  j["domain_size"] = instance.domain().size;
  Json payloads = Json::array();
  for (const Payload& p : instance.payloads()) payloads.push_back(payload_to_json(p));
  j["payloads"] = std::move(payloads);
  Json constraints = Json::array();
  for (const Constraint& c : instance.constraints()) {
    Json cj;
    cj["scope"] = c.scope;
    cj["payload_id"] = c.payload_id;
    cj["weight"] = rational_to_string(c.weight);
    cj["hard"] = c.hard;
    constraints.push_back(std::move(cj));
  }
  j["constraints"] = std::move(constraints);
  if (instance.allows_zero_weight()) j["internal_zero_weights"] = true;
  return j;
}

Instance instance_from_json(const Json& j) {
  expect_format(j, "csplab-instance");
  try {
    InstanceKind kind = kind_from_string(j.at("kind").get<std::string>());
    int num_vars = j.at("num_vars").get<int>();
    int domain_size = j.at("domain_size").get<int>();
    std::vector<Payload> payloads;
    for (const Json& pj : j.at("payloads")) payloads.push_back(payload_from_json(pj, domain_size));
    std::vector<Constraint> constraints;
    for (const Json& cj : j.at("constraints")) {
      Constraint c;
      c.scope = cj.at("scope").get<std::vector<int>>();
      c.payload_id = cj.at("payload_id").get<int>();
      c.weight = rational_from_string(cj.at("weight").get<std::string>());
      c.hard = cj.at("hard").get<bool>();
      constraints.push_back(std::move(c));
    }
    bool zero_ok = j.value("internal_zero_weights", false);
    return Instance(num_vars, Domain(domain_size), std::move(payloads), std::move(constraints),
                    kind, zero_ok);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

Json language_to_json(const Language& language) {
  Json j;
  j["format"] = "csplab-language";
  j["domain_size"] = language.domain().size;
  Json members = Json::array();
  for (const Payload& m : language.members()) members.push_back(payload_to_json(m));
  j["members"] = std::move(members);
  return j;
}

Language language_from_json(const Json& j) {
  expect_format(j, "csplab-language");
  try {
    int domain_size = j.at("domain_size").get<int>();
    std::vector<Payload> members;
    for (const Json& mj : j.at("members")) members.push_back(payload_from_json(mj, domain_size));
    return Language(Domain(domain_size), std::move(members));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed language: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid language: ") + e.what());
  }
}

Json solution_to_json(const LPSolution& solution) {
  Json j;
  j["format"] = "csplab-lp-solution";
  j["blp_value"] = rational_to_string(solution.blp_value);
  j["denominator"] = solution.denominator.str();
  Json pv = Json::array();
  for (const auto& dist : solution.p_v) {
    Json row = Json::array();
    for (const Rational& x : dist) row.push_back(rational_to_string(x));
    pv.push_back(std::move(row));
  }
  j["p_v"] = std::move(pv);
  Json pc = Json::array();
  for (const auto& dist : solution.p_c) {
    Json row = Json::array();
    for (const Rational& x : dist) row.push_back(rational_to_string(x));
    pc.push_back(std::move(row));
  }
  j["p_c"] = std::move(pc);
  return j;
}

LPSolution solution_from_json(const Json& j) {
  expect_format(j, "csplab-lp-solution");
  try {
    LPSolution s;
    s.blp_value = rational_from_string(j.at("blp_value").get<std::string>());
    s.denominator = Integer(j.at("denominator").get<std::string>());
    for (const Json& row : j.at("p_v")) {
      std::vector<Rational> dist;
      for (const Json& x : row) dist.push_back(rational_from_string(x.get<std::string>()));
      s.p_v.push_back(std::move(dist));
    }
    for (const Json& row : j.at("p_c")) {
      std::vector<Rational> dist;
      for (const Json& x : row) dist.push_back(rational_from_string(x.get<std::string>()));
      s.p_c.push_back(std::move(dist));
    }
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed LP solution: ") + e.what());
  }
}

Json symmetric_op_to_json(const SymmetricOperation& op) {
  Json j;
  j["format"] = "csplab-symmetric-op";
  j["domain_size"] = op.domain_size();
  j["arity"] = op.arity();
  Json entries = Json::array();
  for (std::size_t i = 0; i < op.table.size(); ++i) {
    Json e;
    e["counts"] = op.space->at(i).counts;
    e["value"] = op.table[i];
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

SymmetricOperation symmetric_op_from_json(const Json& j) {
  expect_format(j, "csplab-symmetric-op");
  try {
    int domain_size = j.at("domain_size").get<int>();
    int arity = j.at("arity").get<int>();
    auto space = std::make_shared<MultisetSpace>(domain_size, arity);
    std::vector<Label> table(space->size(), -1);
    for (const Json& e : j.at("entries")) {
      Multiset m{e.at("counts").get<std::vector<int>>()};
      Label v = e.at("value").get<Label>();
      if (v < 0 || v >= domain_size) throw ParseError("operation value out of domain");
      table[space->index_of(m)] = v;
    }
    for (Label v : table)
      if (v == -1) throw ParseError("operation table must be total on Delta_n");
    return {space, std::move(table)};
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed symmetric operation: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid symmetric operation: ") + e.what());
  }
}

Json rounding_report_to_json(const RoundingReport& report) {
  Json j;
  j["format"] = "csplab-rounding-report";
  j["scheme"] = report.scheme;
  j["mode"] = report.mode;
  j["assignment"] = report.assignment.values;
  j["value"] = rational_to_string(report.value);
  j["blp_value"] = rational_to_string(report.blp_value);
  j["hard_violations"] = report.hard_violations;
  j["hard_feasible"] = report.hard_feasible;
  j["h_used"] = report.h_used.str();
  Json cands = Json::array();
  for (const Integer& h : report.h_candidates) cands.push_back(h.str());
  j["h_candidates"] = std::move(cands);
  j["seed"] = report.seed;
  j["denominator"] = report.denominator.str();
  return j;
}

Json hypergraph_to_json(const Hypergraph& h) {
  Json j;
  j["format"] = "csplab-hypergraph";
  j["num_vertices"] = h.num_vertices;
  j["arity"] = h.arity;
  j["edges"] = h.edges;
  return j;
}

Hypergraph hypergraph_from_json(const Json& j) {
  expect_format(j, "csplab-hypergraph");
  try {
    Hypergraph h;
    h.num_vertices = j.at("num_vertices").get<int>();
    h.arity = j.at("arity").get<int>();
    h.edges = j.at("edges").get<std::vector<std::vector<int>>>();
    h.validate();
    return h;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed hypergraph: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid hypergraph: ") + e.what());
  }
}

Json lattice_to_json(const Lattice& lattice) {
  Json j;
  j["format"] = "csplab-lattice";
  j["ground_size"] = lattice.ground_size();
  j["masks"] = lattice.masks();
  return j;
}

Lattice lattice_from_json(const Json& j) {
  expect_format(j, "csplab-lattice");
  try {
    return Lattice(j.at("ground_size").get<int>(),
                   j.at("masks").get<std::vector<std::uint64_t>>());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed lattice: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid lattice: ") + e.what());
  }
}

Json pp_formula_to_json(const PPFormula& formula) {
  Json j;
  j["format"] = "csplab-pp-formula";
  j["num_free"] = formula.num_free;
  j["num_bound"] = formula.num_bound;
  Json atoms = Json::array();
  for (const PPAtom& a : formula.atoms) {
    Json aj;
    if (a.member_index == -1)
      aj["member"] = "eq";
    else
      aj["member"] = a.member_index;
    aj["vars"] = a.vars;
    atoms.push_back(std::move(aj));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

PPFormula pp_formula_from_json(const Json& j) {
  expect_format(j, "csplab-pp-formula");
  try {
    PPFormula f;
    f.num_free = j.at("num_free").get<int>();
    f.num_bound = j.at("num_bound").get<int>();
    for (const Json& aj : j.at("atoms")) {
      PPAtom a;
      if (aj.at("member").is_string()) {
        if (aj.at("member").get<std::string>() != "eq")
          throw ParseError("atom member must be an index or \"eq\"");
        a.member_index = -1;
      } else {
        a.member_index = aj.at("member").get<int>();
      }
      a.vars = aj.at("vars").get<std::vector<int>>();
      f.atoms.push_back(std::move(a));
    }
    return f;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed pp formula: ") + e.what());
  }
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("cannot parse " + path.string() + ": " + e.what());
  }
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << dump_canonical(j);
}

}  // namespace csplab
