#include "qsocount/check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "qsocount/counting.hpp"
#include "qsocount/error.hpp"
#include "qsocount/eval.hpp"
#include "qsocount/generators.hpp"
#include "qsocount/normalize.hpp"
#include "qsocount/syntax.hpp"

namespace qsocount {

namespace {

struct Mismatch {
  std::string message;
  std::string instance;
};

// Shape of the instances a suite actually drew.
struct TrialStats {
  std::uint64_t nonzero = 0;
  std::uint64_t max_vars = 0;
  std::uint64_t total_vars = 0;

  void record(std::uint64_t value, std::uint64_t vars) {
    nonzero += value != 0;
    max_vars = std::max(max_vars, vars);
    total_vars += vars;
  }
};

using Trial = std::function<std::optional<Mismatch>(std::uint64_t trial_seed, TrialStats& stats)>;

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << v;
  return out.str();
}

std::string mismatch(const std::string& what, std::uint64_t got, std::uint64_t expected) {
  return what + ": got " + std::to_string(got) + ", oracle " + std::to_string(expected);
}

std::optional<Mismatch> parsimony_trial(std::uint64_t trial_seed, TrialStats& stats) {
  Rng rng(trial_seed);
  const auto vocab = gen::default_vocabulary();
  while (true) {
    auto alpha = gen::qso_sentence(rng);
    auto structure = gen::structure(rng, vocab, 1, 3);
    auto nf = normalize_qso(alpha, vocab);
    const auto n = structure.universe_size();
    std::uint64_t vars = 0;
    if (!nf.terms.empty())
      for (const auto& x : nf.terms.front().so_vars) vars += *checked_power(n, x.arity);
    for (const auto& t : nf.terms) vars += *checked_power(n, t.fo_sum_vars.size());
    if (vars > 22) continue;
    auto reduced = reduce_qso_to_d2s(nf, structure);
    auto got = count_bruteforce(reduced.formula).count;
    auto expected = qso_eval(structure, alpha);
    stats.record(expected, reduced.formula.num_vars);
    if (got == expected) return std::nullopt;
    return Mismatch{mismatch("d2s model count", got, expected),
                    serialize_structure(structure) + "formula " + print(alpha) + "\n"};
  }
}

std::optional<Mismatch> product_trial(std::uint64_t trial_seed, TrialStats& stats) {
  Rng rng(trial_seed);
  auto spec = gen::pi2_spec(rng);
  auto structure = gen::structure(rng, gen::default_vocabulary(), 1, 3);
  auto instance = serialize_structure(structure) + "spec " + print(spec) + "\n";
  auto expected = pi2_count(structure, spec);
  auto result = reduce_pi2_to_monotone(spec, structure);
  stats.record(expected, result.cnf.num_vars);
  if (result.unsatisfiable) {
    if (expected == 0) return std::nullopt;
    return Mismatch{mismatch("reduction reported unsatisfiable, count", 0, expected), instance};
  }
  auto got = count_bruteforce(result.cnf).count << result.exponent;
  if (got == expected && expected != 0) return std::nullopt;
  return Mismatch{mismatch("count(cnf) * 2^n(A)", got, expected), instance};
}

std::uint64_t vertex_covers(const Graph& g) {
  std::uint64_t total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.num_vertices); ++s) {
    bool covers = true;
    for (auto [u, v] : g.edges) covers = covers && (((s >> u) & 1u) || ((s >> v) & 1u));
    total += covers;
  }
  return total;
}

std::optional<Mismatch> roundtrip_trial(std::uint64_t trial_seed, TrialStats& stats) {
  Rng rng(trial_seed);
  auto phi = gen::d2s(rng, 4, 2, 3);
  auto enc = encode_d2s_as_qso(phi);
  auto got = qso_eval(enc.structure, enc.formula);
  auto expected = count_bruteforce(phi).count;
  stats.record(expected, enc.structure.universe_size());
  if (got != expected) return Mismatch{mismatch("qso_eval of the d2s encoding", got, expected), serialize_d2s(phi)};

  auto cnf = gen::monotone_cnf(rng, 4);
  auto mono = encode_monotone_as_pi2(cnf);
  auto pi2 = pi2_count(mono.structure, mono.spec);
  auto want = count_bruteforce(cnf).count << mono.correction_exponent;
  if (pi2 != want)
    return Mismatch{mismatch("pi2_count of the monotone encoding", pi2, want), serialize_monotone_dimacs(cnf)};
  auto back = reduce_pi2_to_monotone(mono.spec, mono.structure);
  if (back.unsatisfiable || (count_bruteforce(back.cnf).count << back.exponent) != pi2)
    return Mismatch{"product reduction of the monotone encoding disagrees with pi2_count",
                    serialize_monotone_dimacs(cnf)};

  auto g = gen::graph(rng, 4);
  auto vc = encode_vc(g);
  auto vc_count = pi2_count(vc.structure, vc.spec);
  auto vc_want = vertex_covers(g) << vc.correction_exponent;
  if (vc_count != vc_want) return Mismatch{mismatch("pi2_count of the cover encoding", vc_count, vc_want), serialize_graph(g)};
  auto vc_back = reduce_pi2_to_monotone(vc.spec, vc.structure);
  if (vc_back.unsatisfiable || (count_bruteforce(vc_back.cnf).count << vc_back.exponent) != vc_count)
    return Mismatch{"product reduction of the cover encoding disagrees with pi2_count", serialize_graph(g)};
  return std::nullopt;
}

std::optional<Mismatch> selfreduce_trial(std::uint64_t trial_seed, TrialStats& stats) {
  Rng rng(trial_seed);
  auto phi = gen::d2s(rng, 14);
  auto brute = count_bruteforce(phi);
  auto self = count_selfreduce(phi);
  stats.record(brute.count, phi.num_vars);
  if (self.count != brute.count)
    return Mismatch{mismatch("selfreduce count", self.count, brute.count), serialize_d2s(phi)};
  const std::uint64_t bound = brute.count == 0 ? 1 : 2 * (std::uint64_t{phi.num_vars} + 1) * brute.count;
  if ((brute.count == 0 && self.nodes_explored != 1) || self.nodes_explored > bound)
    return Mismatch{"nodes_explored " + std::to_string(self.nodes_explored) + " breaks the bound " +
                        std::to_string(bound),
                    serialize_d2s(phi)};
  if (d2s_satisfiable(phi) != (brute.count > 0))
    return Mismatch{"d2s_satisfiable disagrees with the model count", serialize_d2s(phi)};
  return std::nullopt;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<Mismatch> mr_trial(std::uint64_t trial_seed, TrialStats& stats) {
  Rng rng(trial_seed);
  const std::uint64_t n = 3 + 2 * rng.below(1000);  // odd, 3..2001
  auto wc = miller_rabin_witness_count(n);
  stats.record(wc.witnesses, n);
  const auto instance = "n " + std::to_string(n) + "\n";
  if (is_prime(n)) {
    if (wc.witnesses != 0) return Mismatch{mismatch("witnesses of a prime", wc.witnesses, 0), instance};
  } else if (2 * wc.witnesses <= n - 1) {
    return Mismatch{"composite with only " + std::to_string(wc.witnesses) + " witnesses", instance};
  }
  auto check = check_mr(wc.sampler);
  if (!check.holds || check.accepted != wc.witnesses)
    return Mismatch{"sampler acceptance " + std::to_string(check.accepted) + " breaks the promise", instance};
  return std::nullopt;
}

Trial trial_for(const std::string& name) {
  if (name == "parsimony") return parsimony_trial;
  if (name == "product") return product_trial;
  if (name == "roundtrip") return roundtrip_trial;
  if (name == "selfreduce") return selfreduce_trial;
  if (name == "mr") return mr_trial;
  throw Error("check.suite", "unknown suite '" + name + "'");
}

TrialFailure failure(const std::string& suite, std::uint64_t trial, std::uint64_t trial_seed, Mismatch m) {
  return {trial, trial_seed, std::move(m.message), std::move(m.instance),
          "qsocount check --suite " + suite + " --trial-seed " + hex(trial_seed)};
}

void run_trial(SuiteReport& report, const Trial& trial, std::uint64_t index, std::uint64_t trial_seed,
               TrialStats& stats) {
  std::optional<Mismatch> m;
  try {
    m = trial(trial_seed, stats);
  } catch (const Error& e) {
    m = Mismatch{e.code() + ": " + e.what(), ""};
  }
  if (m) report.failed_trials.push_back(failure(report.suite, index, trial_seed, std::move(*m)));
}

// The estimator suite is statistical: each trial is one seed, and a
// configuration fails when its miss rate over all seeds exceeds delta + 0.05.
struct EstimatorConfig {
  std::uint64_t accepted;
  double epsilon;
  double delta;
};

constexpr std::uint64_t kEstimatorDomain = 20;

const std::vector<EstimatorConfig>& estimator_configs() {
  static const std::vector<EstimatorConfig> configs = {
      {11, 0.2, 0.1}, {11, 0.1, 0.05}, {15, 0.2, 0.1}, {15, 0.1, 0.05}, {20, 0.2, 0.1}, {20, 0.1, 0.05},
  };
  return configs;
}

bool estimator_miss(const EstimatorConfig& c, std::uint64_t seed) {
  auto s = gen::threshold_sampler(kEstimatorDomain, c.accepted);
  auto est = estimate_fraction(s, {c.epsilon, c.delta, 0.5, seed});
  const double p = static_cast<double>(c.accepted) / kEstimatorDomain;
  return est.p_hat < (1 - c.epsilon) * p || est.p_hat > (1 + c.epsilon) * p;
}

void run_estimator(SuiteReport& report, const std::vector<std::uint64_t>& seeds, std::uint64_t first_index) {
  const auto zero = gen::threshold_sampler(kEstimatorDomain, 0);
  for (std::size_t t = 0; t < seeds.size(); ++t)
    if (fpras_rp1(zero, 0.25, 0.25, seeds[t]).estimate != 0.0 || rp_decide(zero, seeds[t]))
      report.failed_trials.push_back(failure(report.suite, first_index + t, seeds[t],
                                             {"zero sampler produced a nonzero answer", "N 20 acc 0\n"}));
  for (const auto& c : estimator_configs()) {
    std::uint64_t misses = 0;
    for (auto seed : seeds) misses += estimator_miss(c, seed);
    const double rate = seeds.empty() ? 0.0 : static_cast<double>(misses) / static_cast<double>(seeds.size());
    std::ostringstream key;
    key << "miss_rate_p" << c.accepted << "_of_" << kEstimatorDomain << "_eps" << c.epsilon << "_delta" << c.delta;
    report.metrics.emplace_back(key.str(), rate);
    if (rate > c.delta + 0.05) {
      std::ostringstream msg;
      msg << "miss rate " << rate << " exceeds delta + 0.05 = " << c.delta + 0.05;
      report.failed_trials.push_back(failure(report.suite, first_index, seeds.empty() ? 0 : seeds.front(),
                                             {msg.str(), "N 20 acc " + std::to_string(c.accepted) + "\n"}));
    }
  }
}

void add_metrics(SuiteReport& report, const TrialStats& stats) {
  if (report.trials == 0) return;
  const auto t = static_cast<double>(report.trials);
  // The "size" is the instance's variable count (mr: n).
  report.metrics.emplace_back("nonzero_fraction", static_cast<double>(stats.nonzero) / t);
  report.metrics.emplace_back("mean_size", static_cast<double>(stats.total_vars) / t);
  report.metrics.emplace_back("max_size", static_cast<double>(stats.max_vars));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"parsimony", "product", "roundtrip", "selfreduce", "estimator", "mr"};
  return names;
}

bool is_suite(const std::string& name) {
  for (const auto& n : suite_names())
    if (n == name) return true;
  return false;
}

SuiteReport run_suite(const std::string& name, std::uint64_t trials, std::uint64_t seed) {
  SuiteReport report{name, seed, trials, 0, {}, {}};
  if (name == "estimator") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t t = 0; t < trials; ++t) seeds.push_back(derive_seed(seed, t));
    run_estimator(report, seeds, 0);
  } else {
    auto trial = trial_for(name);
    TrialStats stats;
    for (std::uint64_t t = 0; t < trials; ++t) run_trial(report, trial, t, derive_seed(seed, t), stats);
    add_metrics(report, stats);
  }
  report.failures = report.failed_trials.size();
  return report;
}

SuiteReport replay_trial(const std::string& name, std::uint64_t trial_seed) {
  SuiteReport report{name, trial_seed, 1, 0, {}, {}};
  if (name == "estimator") {
    run_estimator(report, {trial_seed}, 0);
  } else {
    TrialStats stats;
    run_trial(report, trial_for(name), 0, trial_seed, stats);
    add_metrics(report, stats);
  }
  report.failures = report.failed_trials.size();
  return report;
}

}  // namespace qsocount
