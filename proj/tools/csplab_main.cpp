#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "csplab/blp.hpp"
#include "csplab/core.hpp"
#include "csplab/gadgets.hpp"
#include "csplab/json_io.hpp"
#include "csplab/polylab.hpp"
#include "csplab/rounding.hpp"

using namespace csplab;

namespace {

struct CommonOpts {
  std::string output = "-";
  bool verbose = false;
};

void emit(const CommonOpts& opts, const Json& j) {
  if (opts.output == "-")
    std::cout << dump_canonical(j);
  else
    save_json_file(opts.output, j);
}

struct LanguageSource {
  std::string preset;
  int param = 0;
  bool with_eq = false, with_singletons = false;
  std::string language_path;

  Language resolve() const {
    if (!language_path.empty()) return language_from_json(load_json_file(language_path));
    if (preset.empty()) throw ParseError("need --preset or --language");
    return preset_language(preset, param, {with_eq, with_singletons});
  }
};

void add_language_flags(CLI::App* cmd, LanguageSource& src) {
  cmd->add_option("--preset", src.preset, "preset language name");
  cmd->add_option("--param", src.param, "preset parameter (k or s)");
  cmd->add_flag("--with-eq", src.with_eq, "add the equality relation");
  cmd->add_flag("--with-singletons", src.with_singletons, "add all unary singletons");
  cmd->add_option("--language", src.language_path, "language JSON file");
}

Lattice resolve_lattice(const std::string& lattice_path, int domain_size) {
  if (!lattice_path.empty()) return lattice_from_json(load_json_file(lattice_path));
  // default: the labels are the subset bitmasks of a powerset domain
  int s = 0;
  while ((1 << s) < domain_size) ++s;
  if ((1 << s) != domain_size)
    throw ParseError("domain size is not a power of two; pass --lattice explicitly");
  return Lattice::powerset(s);
}

int run_solve(const CommonOpts& common, const std::string& instance_path, bool brute,
              bool verify_loss, std::size_t brute_cap) {
  Instance inst = instance_from_json(load_json_file(instance_path));
  LPSolution sol = solve_blp(inst);
  Json report;
  report["format"] = "csplab-solve-report";
  report["blp_value"] = rational_to_string(sol.blp_value);
  report["solution"] = solution_to_json(sol);
  if (brute) {
    BruteForceResult opt = brute_force_opt(inst, brute_cap);
    report["opt"] = rational_to_string(opt.value);
    report["opt_witness"] = opt.witness.values;
  }
  if (verify_loss) {
    LossIdentityReport lr = verify_loss_identity(inst, sol);
    Json jl;
    jl["all_ok"] = lr.all_ok;
    jl["constraint_ok"] = lr.constraint_ok;
    report["loss_identity"] = std::move(jl);
  }
  emit(common, report);
  if (common.verbose) std::cerr << "blp value " << sol.blp_value << "\n";
  return 0;
}

int run_round(const CommonOpts& common, const std::string& instance_path,
              const std::string& solution_path, const std::string& scheme,
              const std::string& mode_name, const std::string& op_file,
              const std::string& lattice_path, std::uint64_t seed, bool seed_set, int K,
              Integer min_denominator) {
  Instance inst = instance_from_json(load_json_file(instance_path));
  LPSolution sol = solution_path.empty() ? solve_blp(inst)
                                         : solution_from_json(load_json_file(solution_path));
  RoundingMode mode;
  if (mode_name == "sample") {
    if (!seed_set) throw ParseError("--seed is required for sample mode");
    mode = RoundingMode::Sample;
  } else if (mode_name == "derandomized") {
    mode = RoundingMode::Derandomized;
  } else {
    throw ParseError("mode must be sample or derandomized");
  }

  RoundingReport rep;
  if (scheme == "lattice") {
    Lattice lattice = resolve_lattice(lattice_path, inst.domain().size);
    int use_K = K > 0 ? K : inst.max_constraint_arity();
    Integer target = 1;
    for (int i = 0; i < use_K; ++i) target *= inst.domain().size;
    if (min_denominator > target) target = min_denominator;
    sol = rescale_denominator(sol, target);
    rep = lattice_round(inst, sol, lattice, mode, seed, use_K);
  } else if (scheme == "three-element") {
    Integer target = min_denominator > 3 ? min_denominator : Integer(3);
    sol = rescale_denominator(sol, target);
    rep = three_element_round(inst, sol, mode, seed);
  } else if (scheme == "symmetric") {
    if (op_file.empty()) throw ParseError("--op-file is required for the symmetric scheme");
    SymmetricOperation g = symmetric_op_from_json(load_json_file(op_file));
    sol = rescale_denominator(sol, Integer(g.arity()));
    if (Integer(g.arity()) != sol.denominator)
      throw ParseError("operation arity does not match the solution denominator");
    Assignment s = round_symmetric(sol, g);
    EvalResult r = evaluate(inst, s);
    rep.assignment = s;
    rep.value = r.value;
    rep.hard_violations = r.hard_violations;
    rep.hard_feasible = r.hard_violations == 0;
    rep.blp_value = sol.blp_value;
    rep.scheme = "symmetric";
    rep.mode = "deterministic";
    rep.h_used = 0;
    rep.seed = seed;
    rep.denominator = sol.denominator;
  } else {
    throw ParseError("scheme must be lattice, three-element or symmetric");
  }
  emit(common, rounding_report_to_json(rep));
  if (common.verbose)
    std::cerr << "rounded value " << rep.value << " (blp " << rep.blp_value << ")\n";
  return 0;
}

int run_analyze(const CommonOpts& common, const LanguageSource& src,
                const std::vector<int>& arities, int nu_arity, std::size_t cap) {
  Language lang = src.resolve();
  Json report;
  report["format"] = "csplab-analyze-report";
  report["domain_size"] = lang.domain().size;
  report["max_arity"] = lang.max_arity();
  report["has_equality"] = lang.has_equality();
  report["has_singletons"] = lang.has_singletons();
  Json rows = Json::array();
  for (int n : arities) {
    auto ops = enumerate_symmetric_polymorphisms(lang, n, cap);
    Json row;
    row["arity"] = n;
    row["count"] = ops.size();
    Json op_list = Json::array();
    for (const auto& op : ops) {
      OperationClass cls = classify_operation(op.to_general(cap));
      Json oj = symmetric_op_to_json(op);
      Json flags;
      flags["idempotent"] = cls.idempotent;
      flags["symmetric"] = cls.symmetric;
      flags["totally_symmetric"] = cls.totally_symmetric;
      flags["nu"] = cls.nu;
      flags["wnu"] = cls.wnu;
      oj["classification"] = std::move(flags);
      op_list.push_back(std::move(oj));
    }
    row["operations"] = std::move(op_list);
    rows.push_back(std::move(row));
  }
  report["symmetric_polymorphisms"] = std::move(rows);
  if (nu_arity >= 3) {
    auto nu = find_nu_polymorphism(lang, nu_arity, cap);
    Json nj;
    nj["arity"] = nu_arity;
    nj["found"] = nu.has_value();
    if (nu) nj["table"] = nu->table;
    report["nu_search"] = std::move(nj);
  }
  emit(common, report);
  if (common.verbose)
    for (const auto& row : report["symmetric_polymorphisms"])
      std::cerr << "arity " << row["arity"] << ": " << row["count"]
                << " symmetric polymorphism(s)\n";
  return 0;
}

int run_gap_probe(const CommonOpts& common, const LanguageSource& src,
                  const std::vector<int>& ns, std::size_t assignment_cap, std::size_t cap) {
  Language lang = src.resolve();
  Json report;
  report["format"] = "csplab-gap-probe-report";
  report["domain_size"] = lang.domain().size;
  Json rows = Json::array();
  std::optional<Rational> prev;
  bool increasing = true;
  for (int n : ns) {
    Instance univ = universal_instance(lang, n, cap);
    CBoundResult r = min_c_bound(lang, n, assignment_cap, cap);
    Json row;
    row["n"] = n;
    row["delta_size"] = univ.num_vars();
    row["universal_constraints"] = univ.constraints().size();
    row["feasible"] = r.feasible;
    if (r.feasible) {
      row["c"] = rational_to_string(r.c);
      row["support_size"] = r.support.support.size();
      if (prev && !(r.c > *prev)) increasing = false;
      prev = r.c;
    }
    rows.push_back(std::move(row));
  }
  report["rows"] = std::move(rows);
  report["c_strictly_increasing"] = increasing;
  emit(common, report);
  return 0;
}

int run_lipschitz(const CommonOpts& common, const std::string& family, int ground, int K,
                  const std::string& lattice_path, const std::vector<int>& ns, std::size_t cap) {
  Json report;
  report["format"] = "csplab-lipschitz-report";
  report["family"] = family;
  Json rows = Json::array();
  Rational max_c(0);
  for (int n : ns) {
    FractionalOperation phi;
    if (family == "lattice") {
      Lattice lattice = lattice_path.empty() ? Lattice::powerset(ground)
                                             : lattice_from_json(load_json_file(lattice_path));
      phi = make_phi_lattice(lattice, K, n, cap);
    } else if (family == "three-element") {
      phi = make_phi_three_element(n, cap);
    } else {
      throw ParseError("family must be lattice or three-element");
    }
    Rational c = lipschitz_constant(phi, cap);
    if (c > max_c) max_c = c;
    Json row;
    row["n"] = n;
    row["support_size"] = phi.support.size();
    row["c"] = rational_to_string(c);
    rows.push_back(std::move(row));
    if (common.verbose) std::cerr << "n=" << n << " c=" << c << "\n";
  }
  report["rows"] = std::move(rows);
  report["max_c"] = rational_to_string(max_c);
  emit(common, report);
  return 0;
}

int run_gadget(const CommonOpts& common, const LanguageSource& src, bool emit_language,
               const std::string& hypergraph_path, int member, int a, int b,
               const std::string& pp_path) {
  if (emit_language) {
    emit(common, language_to_json(src.resolve()));
    return 0;
  }
  if (hypergraph_path.empty()) throw ParseError("need --emit-language or --hypergraph");
  Language lang = src.resolve();
  if (member < 0 || member >= static_cast<int>(lang.members().size()))
    throw ParseError("--member index out of range");
  Relation R = payload_zero_relation(lang.members()[static_cast<std::size_t>(member)]);
  Hypergraph h = hypergraph_from_json(load_json_file(hypergraph_path));
  std::optional<PPFormula> pp;
  std::optional<Language> pp_lang;
  if (!pp_path.empty()) {
    pp = pp_formula_from_json(load_json_file(pp_path));
    pp_lang = lang;
  }
  Instance gadget = hypergraph_gadget(h, R, a, b, pp, pp_lang);
  emit(common, instance_to_json(gadget));
  return 0;
}

int run_bench(const CommonOpts& common, const LanguageSource& src, int count, int vars,
              int constraints, std::uint64_t seed, std::size_t brute_cap, std::size_t cap) {
  Language lang = src.resolve();
  Json report;
  report["format"] = "csplab-bench-report";
  report["count"] = count;
  report["num_vars"] = vars;
  report["num_constraints"] = constraints;
  report["base_seed"] = seed;
  Json rows = Json::array();
  for (int i = 0; i < count; ++i) {
    std::uint64_t instance_seed = seed + static_cast<std::uint64_t>(i);
    Instance inst =
        random_instance(lang, vars, constraints, Rational(1, 2), Rational(2), instance_seed);
    BruteForceResult opt = brute_force_opt(inst, brute_cap);
    LPSolution sol = solve_blp(inst);
    Json row;
    row["seed"] = instance_seed;
    row["opt"] = rational_to_string(opt.value);
    row["blp"] = rational_to_string(sol.blp_value);
    std::string scheme;
    std::optional<Rational> rounded;
    if (src.preset == "powerset_lattice") {
      int s = 0;
      while ((1 << s) < lang.domain().size) ++s;
      Integer target = 1;
      for (int k = 0; k < lang.max_arity(); ++k) target *= lang.domain().size;
      LPSolution scaled = rescale_denominator(sol, target);
      RoundingReport rep = lattice_round(inst, scaled, Lattice::powerset(s),
                                         RoundingMode::Derandomized, 0, lang.max_arity());
      rounded = rep.value;
      scheme = "lattice";
    } else if (src.preset == "r_plus_minus") {
      LPSolution scaled = rescale_denominator(sol, 3);
      RoundingReport rep = three_element_round(inst, scaled, RoundingMode::Derandomized, 0);
      rounded = rep.value;
      scheme = "three_element";
    } else {
      // generic route: any symmetric polymorphism of the right arity
      int n = static_cast<int>(sol.denominator);
      auto ops = enumerate_symmetric_polymorphisms(lang, n, cap);
      if (!ops.empty()) {
        Assignment s = round_symmetric(sol, ops.front());
        rounded = evaluate(inst, s).value;
        scheme = "symmetric";
      }
    }
    if (rounded) {
      row["rounded"] = rational_to_string(*rounded);
      row["scheme"] = scheme;
      if (*rounded < sol.blp_value) throw std::logic_error("rounded value below BLP bound");
    } else {
      row["rounded"] = nullptr;
      row["scheme"] = nullptr;
    }
    if (opt.value < sol.blp_value) throw std::logic_error("OPT below BLP bound");
    rows.push_back(std::move(row));
    if (common.verbose)
      std::cerr << "seed " << instance_seed << ": opt " << opt.value << ", blp " << sol.blp_value
                << "\n";
  }
  report["rows"] = std::move(rows);
  emit(common, report);
  return 0;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csplab: exact LP relaxation, rounding and polymorphism laboratory for Min CSPs"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--output,-o", common.output, "output file (- for stdout)")
      ->capture_default_str();
  app.add_flag("--verbose,-v", common.verbose, "human-readable progress on stderr");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve the basic LP relaxation");
  std::string solve_instance;
  bool solve_brute = false, solve_verify_loss = false;
  std::size_t brute_cap = 10'000'000;
  solve_cmd->add_option("--instance", solve_instance, "instance JSON")->required();
  solve_cmd->add_flag("--brute-force", solve_brute, "also compute OPT exhaustively");
  solve_cmd->add_flag("--verify-loss", solve_verify_loss, "check the per-constraint loss identity");
  solve_cmd->add_option("--brute-cap", brute_cap, "assignment cap for brute force");

  // round
  auto* round_cmd = app.add_subcommand("round", "round an LP solution to an assignment");
  std::string round_instance, round_solution, round_scheme, round_mode = "derandomized";
  std::string round_op_file, round_lattice;
  std::uint64_t round_seed = 0;
  bool round_seed_set = false;
  int round_K = 0;
  std::string round_min_den = "1";
  round_cmd->add_option("--instance", round_instance, "instance JSON")->required();
  round_cmd->add_option("--solution", round_solution, "LP solution JSON (default: solve now)");
  round_cmd->add_option("--scheme", round_scheme, "lattice | three-element | symmetric")
      ->required();
  round_cmd->add_option("--mode", round_mode, "sample | derandomized");
  round_cmd->add_option("--op-file", round_op_file, "symmetric operation JSON");
  round_cmd->add_option("--lattice", round_lattice, "lattice JSON (default: powerset)");
  round_cmd->add_option("--seed", round_seed, "rng seed (sample mode)")
      ->each([&round_seed_set](const std::string&) { round_seed_set = true; });
  round_cmd->add_option("--K", round_K, "maximum arity override");
  round_cmd->add_option("--min-denominator", round_min_den, "rescale target before rounding");

  // analyze-language
  auto* analyze_cmd =
      app.add_subcommand("analyze-language", "enumerate and classify polymorphisms");
  LanguageSource analyze_src;
  add_language_flags(analyze_cmd, analyze_src);
  std::string analyze_arities = "1,2,3";
  int analyze_nu = 3;
  std::size_t enum_cap = 10'000'000;
  analyze_cmd->add_option("--arities", analyze_arities, "comma-separated arity list");
  analyze_cmd->add_option("--nu-arity", analyze_nu, "NU search arity (0 disables)");
  analyze_cmd->add_option("--enum-cap", enum_cap, "enumeration cap");

  // gap-probe
  auto* gap_cmd = app.add_subcommand("gap-probe", "universal instances and minimal c bounds");
  LanguageSource gap_src;
  add_language_flags(gap_cmd, gap_src);
  std::string gap_ns = "1,2";
  std::size_t assignment_cap = 1'000'000, gap_cap = 10'000'000;
  gap_cmd->add_option("--n-list", gap_ns, "comma-separated n list");
  gap_cmd->add_option("--assignment-cap", assignment_cap, "cap on |A|^|Delta_n|");
  gap_cmd->add_option("--enum-cap", gap_cap, "cap on |Delta_n|^r work");

  // lipschitz
  auto* lip_cmd = app.add_subcommand("lipschitz", "minimal Lipschitz constant per n for a family");
  std::string lip_family, lip_ns = "4,5,6", lip_lattice;
  int lip_ground = 2, lip_K = 2;
  std::size_t lip_cap = 10'000'000;
  lip_cmd->add_option("--family", lip_family, "lattice | three-element")->required();
  lip_cmd->add_option("--ground", lip_ground, "powerset lattice ground size");
  lip_cmd->add_option("--K", lip_K, "maximum relation arity for the h-range");
  lip_cmd->add_option("--lattice", lip_lattice, "lattice JSON (overrides --ground)");
  lip_cmd->add_option("--n-list", lip_ns, "comma-separated n list");
  lip_cmd->add_option("--enum-cap", lip_cap, "cap on |Delta_n|^2 work");

  // gadget
  auto* gadget_cmd =
      app.add_subcommand("gadget", "emit preset languages or hypergraph reductions");
  LanguageSource gadget_src;
  add_language_flags(gadget_cmd, gadget_src);
  bool gadget_emit_language = false;
  std::string gadget_hypergraph, gadget_pp;
  int gadget_member = 0, gadget_a = 0, gadget_b = 1;
  gadget_cmd->add_flag("--emit-language", gadget_emit_language, "emit the language JSON and stop");
  gadget_cmd->add_option("--hypergraph", gadget_hypergraph, "hypergraph JSON");
  gadget_cmd->add_option("--member", gadget_member, "language member index used as R");
  gadget_cmd->add_option("--a", gadget_a, "label a (soft target)");
  gadget_cmd->add_option("--b", gadget_b, "label b");
  gadget_cmd->add_option("--pp", gadget_pp, "pp formula JSON defining R");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "random instances: OPT vs BLP vs rounded");
  LanguageSource bench_src;
  add_language_flags(bench_cmd, bench_src);
  int bench_count = 10, bench_vars = 6, bench_constraints = 8;
  std::uint64_t bench_seed = 0;
  bool bench_seed_set = false;
  std::size_t bench_brute_cap = 10'000'000, bench_cap = 10'000'000;
  bench_cmd->add_option("--count", bench_count, "number of instances");
  bench_cmd->add_option("--vars", bench_vars, "variables per instance");
  bench_cmd->add_option("--constraints", bench_constraints, "constraints per instance");
  bench_cmd->add_option("--seed", bench_seed, "base seed")
      ->each([&bench_seed_set](const std::string&) { bench_seed_set = true; });
  bench_cmd->add_option("--brute-cap", bench_brute_cap, "assignment cap for brute force");
  bench_cmd->add_option("--enum-cap", bench_cap, "enumeration cap");

  for (CLI::App* sub : app.get_subcommands(/*filter=*/[](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed())
      return run_solve(common, solve_instance, solve_brute, solve_verify_loss, brute_cap);
    if (round_cmd->parsed())
      return run_round(common, round_instance, round_solution, round_scheme, round_mode,
                       round_op_file, round_lattice, round_seed, round_seed_set, round_K,
                       Integer(round_min_den));
    if (analyze_cmd->parsed())
      return run_analyze(common, analyze_src, parse_int_list(analyze_arities), analyze_nu,
                         enum_cap);
    if (gap_cmd->parsed())
      return run_gap_probe(common, gap_src, parse_int_list(gap_ns), assignment_cap, gap_cap);
    if (lip_cmd->parsed())
      return run_lipschitz(common, lip_family, lip_ground, lip_K, lip_lattice,
                           parse_int_list(lip_ns), lip_cap);
    if (gadget_cmd->parsed())
      return run_gadget(common, gadget_src, gadget_emit_language, gadget_hypergraph,
                        gadget_member, gadget_a, gadget_b, gadget_pp);
    if (bench_cmd->parsed()) {
      if (!bench_seed_set) throw ParseError("--seed is required for bench");
      return run_bench(common, bench_src, bench_count, bench_vars, bench_constraints, bench_seed,
                       bench_brute_cap, bench_cap);
    }
    throw ParseError("no subcommand given");
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
