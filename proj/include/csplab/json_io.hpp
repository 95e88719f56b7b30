#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "csplab/blp.hpp"
#include "csplab/core.hpp"
#include "csplab/gadgets.hpp"
#include "csplab/polylab.hpp"
#include "csplab/rounding.hpp"

namespace csplab {

// All documents use ordered keys and rationals as "num/den" strings, so
// serialize -> parse -> serialize is byte-identical.
using Json = nlohmann::ordered_json;

Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json language_to_json(const Language& language);
Language language_from_json(const Json& j);

Json solution_to_json(const LPSolution& solution);
LPSolution solution_from_json(const Json& j);

Json symmetric_op_to_json(const SymmetricOperation& op);
SymmetricOperation symmetric_op_from_json(const Json& j);

Json rounding_report_to_json(const RoundingReport& report);

Json hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const Json& j);

Json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const Json& j);

Json pp_formula_to_json(const PPFormula& formula);
PPFormula pp_formula_from_json(const Json& j);

std::string dump_canonical(const Json& j);
Json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace csplab
