// qsocount command-line tool. Every command prints one JSON object on stdout.
// Exit status: 0 success, 1 domain error (JSON error on stderr), 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qsocount/approx.hpp"
#include "qsocount/check.hpp"
#include "qsocount/counting.hpp"
#include "qsocount/error.hpp"
#include "qsocount/eval.hpp"
#include "qsocount/normalize.hpp"
#include "qsocount/random.hpp"
#include "qsocount/reductions.hpp"
#include "qsocount/syntax.hpp"

using nlohmann::json;
using namespace qsocount;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cli.io", "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cli.io", "cannot write '" + path + "'");
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw CLI::ValidationError("--seed", "not an integer: " + text);
  return value;
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

json tuple_json(const Tuple& t) { return json(t); }

json count_json(const CountReport& r) {
  return {{"count", r.count},
          {"method", r.method},
          {"nodes_explored", r.nodes_explored},
          {"elapsed_seconds", r.elapsed_seconds}};
}

json atom_table_json(const AtomTable& table) {
  json so = json::array();
  for (const auto& d : table.so_vars) so.push_back({{"name", d.name}, {"arity", d.arity}});
  json atoms = json::array();
  for (std::size_t i = 0; i < table.atoms.size(); ++i)
    atoms.push_back({{"var", i + 1}, {"so_var", table.atoms[i].so_var}, {"args", tuple_json(table.atoms[i].args)}});
  json selectors = json::array();
  for (std::size_t i = 0; i < table.selectors.size(); ++i)
    selectors.push_back({{"var", table.selectors[i]},
                         {"term", table.groups[i].first},
                         {"args", tuple_json(table.groups[i].second)}});
  return {{"universe_size", table.universe_size}, {"so_vars", so}, {"atoms", atoms}, {"selectors", selectors}};
}

json suite_json(const SuiteReport& r) {
  json failed = json::array();
  for (const auto& f : r.failed_trials)
    failed.push_back({{"trial", f.trial},
                      {"trial_seed", f.trial_seed},
                      {"message", f.message},
                      {"instance", f.instance},
                      {"replay", f.replay}});
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  return {{"suite", r.suite},  {"seed", r.seed},         {"trials", r.trials},
          {"failures", r.failures}, {"failed_trials", failed}, {"metrics", metrics}};
}

// Sampler over the 2^V assignments of a d2s formula; assignment bit v-1 is
// the value of variable v.
CountingSampler d2s_sampler(const Disj2SatFormula& f) {
  if (f.num_vars > 63) throw Error("approx.domain", "d2s sampling supports at most 63 variables");
  return {std::uint64_t{1} << f.num_vars,
          [f](std::uint64_t bits) {
            auto value = [bits](Literal l) { return (((bits >> (var_of(l) - 1)) & 1u) != 0) == (l > 0); };
            for (const auto& conj : f.disjuncts) {
              bool all = true;
              for (const auto& clause : conj) {
                bool any = false;
                for (Literal l : clause) any = any || value(l);
                if (!any) {
                  all = false;
                  break;
                }
              }
              if (all) return true;
            }
            return false;
          },
          false};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting with quantitative second-order logic: evaluation, reductions, exact and approximate counters"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_flag = true;
  app.add_flag("--json", json_flag, "JSON output (the only mode)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a quantitative sentence on a structure");
  std::string structure_path, formula_path, spec_path, output_path;
  unsigned so_budget = EvalBudget{}.max_so_exponent;
  eval_cmd->add_option("--structure", structure_path, "Structure file")->required();
  eval_cmd->add_option("--formula", formula_path, "Formula file")->required();
  eval_cmd->add_option("--budget", so_budget, "Bound on summed |A|^arity of second-order sums")
      ->check(CLI::Range(1u, 62u));

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "Reductions to propositional counting");
  reduce_cmd->require_subcommand(1);
  std::uint64_t ground_budget = EvalBudget{}.max_fo_expansion;
  auto* reduce_d2s = reduce_cmd->add_subcommand("d2s", "Parsimonious reduction to #Disj2Sat");
  reduce_d2s->add_option("--structure", structure_path, "Structure file")->required();
  reduce_d2s->add_option("--formula", formula_path, "Formula file")->required();
  reduce_d2s->add_option("-o,--output", output_path, "Output .d2s file (atom table goes to <output>.json)")->required();
  reduce_d2s->add_option("--budget", ground_budget, "Bound on the grounding size");
  auto* reduce_mono = reduce_cmd->add_subcommand("monotone", "Product reduction to #MonotoneSat");
  reduce_mono->add_option("--structure", structure_path, "Structure file")->required();
  reduce_mono->add_option("--spec", spec_path, "Pi2 spec file")->required();
  reduce_mono->add_option("-o,--output", output_path, "Output DIMACS file (sidecar goes to <output>.json)")->required();
  reduce_mono->add_option("--budget", ground_budget, "Bound on the grounding size");

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Encode a counting problem as a structure and formula");
  std::string encode_kind, input_path;
  encode_cmd->add_option("kind", encode_kind, "vc | mono | d2s")->required()->check(CLI::IsMember({"vc", "mono", "d2s"}));
  encode_cmd->add_option("input", input_path, "Graph (DIMACS p edge), monotone CNF, or d2s file")->required();
  encode_cmd->add_option("-o,--output", output_path, "Output prefix")->required();

  // count
  auto* count_cmd = app.add_subcommand("count", "Exact model count of a d2s or monotone CNF file");
  std::string method = "brute";
  count_cmd->add_option("--method", method, "brute | selfreduce")->check(CLI::IsMember({"brute", "selfreduce"}));
  count_cmd->add_option("file", input_path, "Input file")->required();

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Seeded sampling estimate of an acceptance count");
  double eps = 0.25, delta = 0.25, p_lower = 0.5;
  std::string seed_text = std::to_string(kDefaultSeed);
  std::uint64_t fp_value = 0, mr_value = 0;
  std::string d2s_path;
  estimate_cmd->add_option("--eps", eps, "Relative error in (0,1)");
  estimate_cmd->add_option("--delta", delta, "Failure probability in (0,1)");
  estimate_cmd->add_option("--seed", seed_text, "Seed (decimal or 0x hex), default 0xC0FFEE");
  auto* fp_opt = estimate_cmd->add_option("--fp", fp_value, "Sampler built from a value by the FP construction");
  auto* mr_opt = estimate_cmd->add_option("--miller-rabin", mr_value, "Miller-Rabin witness sampler for odd n");
  auto* d2s_opt = estimate_cmd->add_option("--d2s", d2s_path, "Sampler over the assignments of a d2s file");
  auto* p_opt = estimate_cmd->add_option("--p-lower", p_lower, "Acceptance lower bound for --d2s");
  fp_opt->excludes(mr_opt)->excludes(d2s_opt);
  mr_opt->excludes(d2s_opt);
  p_opt->needs(d2s_opt);

  // check
  auto* check_cmd = app.add_subcommand("check", "Randomized oracle comparison suites");
  std::string suite;
  std::uint64_t trials = 100;
  std::string trial_seed_text;
  check_cmd->add_option("--suite", suite, "parsimony | product | roundtrip | selfreduce | estimator | mr")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  check_cmd->add_option("--trials", trials, "Number of trials");
  check_cmd->add_option("--seed", seed_text, "Seed (decimal or 0x hex), default 0xC0FFEE");
  auto* replay_opt = check_cmd->add_option("--trial-seed", trial_seed_text, "Replay the single trial with this seed");
  (void)replay_opt;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (eval_cmd->parsed()) {
      auto structure = parse_structure(read_file(structure_path));
      auto formula = parse_qso(read_file(formula_path), structure.vocabulary());
      EvalBudget budget;
      budget.max_so_exponent = so_budget;
      emit({{"value", qso_eval(structure, formula, budget)}});
    } else if (reduce_d2s->parsed()) {
      auto structure = parse_structure(read_file(structure_path));
      auto formula = parse_qso(read_file(formula_path), structure.vocabulary());
      EvalBudget budget;
      budget.max_fo_expansion = ground_budget;
      auto nf = normalize_qso(formula, structure.vocabulary());
      auto reduced = reduce_qso_to_d2s(nf, structure, budget);
      write_file(output_path, serialize_d2s(reduced.formula));
      write_file(output_path + ".json", atom_table_json(reduced.table).dump(2) + "\n");
      emit({{"output", output_path},
            {"atom_table", output_path + ".json"},
            {"num_vars", reduced.formula.num_vars},
            {"disjuncts", reduced.formula.disjuncts.size()},
            {"selectors", reduced.table.selectors.size()}});
    } else if (reduce_mono->parsed()) {
      auto structure = parse_structure(read_file(structure_path));
      auto spec = parse_pi2(read_file(spec_path), structure.vocabulary());
      EvalBudget budget;
      budget.max_fo_expansion = ground_budget;
      auto result = reduce_pi2_to_monotone(spec, structure, budget);
      json atoms = json::array();
      for (std::size_t i = 0; i < result.atoms.size(); ++i)
        atoms.push_back({{"var", i + 1}, {"args", tuple_json(result.atoms[i])}});
      json sidecar = {{"unsatisfiable", result.unsatisfiable},
                      {"exponent", result.exponent},
                      {"so_var", spec.so_var.name},
                      {"atoms", atoms}};
      if (!result.unsatisfiable) write_file(output_path, serialize_monotone_dimacs(result.cnf));
      write_file(output_path + ".json", sidecar.dump(2) + "\n");
      emit({{"output", result.unsatisfiable ? json(nullptr) : json(output_path)},
            {"sidecar", output_path + ".json"},
            {"unsatisfiable", result.unsatisfiable},
            {"exponent", result.exponent},
            {"num_vars", result.cnf.num_vars},
            {"clauses", result.cnf.clauses.size()}});
    } else if (encode_cmd->parsed()) {
      auto text = read_file(input_path);
      json out;
      if (encode_kind == "d2s") {
        auto enc = encode_d2s_as_qso(parse_d2s(text));
        write_file(output_path + ".fst", serialize_structure(enc.structure));
        write_file(output_path + ".qso", print(enc.formula) + "\n");
        out = {{"structure", output_path + ".fst"}, {"formula", output_path + ".qso"}, {"correction_exponent", 0}};
      } else {
        auto enc = encode_kind == "vc" ? encode_vc(parse_graph(text)) : encode_monotone_as_pi2(parse_monotone_dimacs(text));
        write_file(output_path + ".fst", serialize_structure(enc.structure));
        write_file(output_path + ".pi2", print(enc.spec) + "\n");
        out = {{"structure", output_path + ".fst"},
               {"formula", output_path + ".pi2"},
               {"correction_exponent", enc.correction_exponent}};
      }
      emit(out);
    } else if (count_cmd->parsed()) {
      auto text = read_file(input_path);
      if (detect_format(text) == PropFormat::Cnf) {
        if (method != "brute") throw Error("propcount.format", "selfreduce counts d2s formulas only");
        emit(count_json(count_bruteforce(parse_monotone_dimacs(text))));
      } else {
        auto f = parse_d2s(text);
        emit(count_json(method == "brute" ? count_bruteforce(f) : count_selfreduce(f)));
      }
    } else if (estimate_cmd->parsed()) {
      const auto seed = parse_seed(seed_text);
      CountingSampler sampler;
      std::string source;
      if (fp_opt->count()) {
        sampler = machine_from_fp(fp_value);
        source = "fp";
      } else if (mr_opt->count()) {
        sampler = miller_rabin_sampler(mr_value);
        source = "miller-rabin";
      } else if (d2s_opt->count()) {
        sampler = d2s_sampler(parse_d2s(read_file(d2s_path)));
        source = "d2s";
      } else {
        throw CLI::RequiredError("one of --fp, --miller-rabin, --d2s");
      }
      EstimateParams params{eps, delta, sampler.promised_mr ? 0.5 : p_lower, seed};
      auto f = estimate_fraction(sampler, params);
      const double estimate =
          f.accepted == 0 ? 0.0
                          : static_cast<double>(f.accepted) * static_cast<double>(sampler.domain_size) /
                                static_cast<double>(f.samples);
      emit({{"estimate", estimate},
            {"m", f.samples},
            {"accepted", f.accepted},
            {"domain_size", sampler.domain_size},
            {"promised_mr", sampler.promised_mr},
            {"p_lower_bound", params.p_lower_bound},
            {"source", source},
            {"seed", seed}});
    } else if (check_cmd->parsed()) {
      if (!trial_seed_text.empty()) {
        emit(suite_json(replay_trial(suite, parse_seed(trial_seed_text))));
      } else {
        emit(suite_json(run_suite(suite, trials, parse_seed(seed_text))));
      }
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
