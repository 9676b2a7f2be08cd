#include "qsocount/counting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>

#include "qsocount/error.hpp"

namespace qsocount {

namespace {

std::size_t node_of(Literal l) { return 2 * var_of(l) + (l < 0 ? 1 : 0); }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Iterative Tarjan over the implication graph; returns the component id of
// every literal node.
std::vector<std::uint32_t> components(const std::vector<std::vector<std::uint32_t>>& graph) {
  const std::size_t n = graph.size();
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  std::uint32_t counter = 0, comp_count = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < graph[v].size()) {
        auto w = graph[v][next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      auto done = v;
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comp_count;
        } while (w != done);
        ++comp_count;
      }
      frames.pop_back();
      if (!frames.empty()) {
        auto parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

}  // namespace

bool sat2_satisfiable(const TwoSatConjunct& conjunct, std::uint32_t num_vars) {
  std::uint32_t top = num_vars;
  for (const auto& clause : conjunct) {
    if (clause.empty()) return false;
    for (Literal l : clause) top = std::max(top, var_of(l));
  }
  std::vector<std::vector<std::uint32_t>> graph(2 * (static_cast<std::size_t>(top) + 1));
  for (const auto& clause : conjunct) {
    Literal a = clause[0];
    Literal b = clause.size() > 1 ? clause[1] : clause[0];
    graph[node_of(-a)].push_back(static_cast<std::uint32_t>(node_of(b)));
    graph[node_of(-b)].push_back(static_cast<std::uint32_t>(node_of(a)));
  }
  auto comp = components(graph);
  for (std::uint32_t v = 1; v <= top; ++v)
    if (comp[2 * v] == comp[2 * v + 1]) return false;
  return true;
}

bool d2s_satisfiable(const Disj2SatFormula& formula) {
  return std::any_of(formula.disjuncts.begin(), formula.disjuncts.end(),
                     [&](const TwoSatConjunct& c) { return sat2_satisfiable(c, formula.num_vars); });
}

namespace {

constexpr std::array<std::uint64_t, 6> kLanePattern = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Literal over the free-variable position `pos`; the six lowest positions
// vary across the 64 lanes of a word, the others are constant per chunk.
struct LaneLiteral {
  std::uint32_t pos;
  bool negative;

  std::uint64_t word(std::uint64_t chunk) const {
    std::uint64_t w = pos < 6 ? kLanePattern[pos] : (((chunk >> (pos - 6)) & 1u) ? ~0ull : 0ull);
    return negative ? ~w : w;
  }
};

using LaneClause = std::vector<LaneLiteral>;
using LaneCnf = std::vector<LaneClause>;

std::uint64_t count_lanes(const std::vector<LaneCnf>& disjuncts, std::size_t free_vars) {
  const std::uint64_t chunks = free_vars > 6 ? std::uint64_t{1} << (free_vars - 6) : 1;
  const std::uint64_t lane_mask = free_vars >= 6 ? ~0ull : (std::uint64_t{1} << (std::uint64_t{1} << free_vars)) - 1;
  std::uint64_t total = 0;
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    std::uint64_t any = 0;
    for (const auto& cnf : disjuncts) {
      std::uint64_t all = ~0ull;
      for (const auto& clause : cnf) {
        std::uint64_t w = 0;
        for (const auto& lit : clause) w |= lit.word(chunk);
        all &= w;
        if (!all) break;
      }
      any |= all;
      if (any == ~0ull) break;
    }
    total += static_cast<std::uint64_t>(std::popcount(any & lane_mask));
  }
  return total;
}

void guard(std::size_t vars) {
  if (vars > kMaxBruteForceVars)
    throw Error("propcount.guard", "brute force is limited to " + std::to_string(kMaxBruteForceVars) +
                                       " variables, got " + std::to_string(vars));
}

}  // namespace

CountReport count_bruteforce(const Disj2SatFormula& formula) {
  Stopwatch watch;
  validate(formula);
  guard(formula.free_count());
  std::vector<std::uint32_t> position(formula.num_vars + 1, 0);
  auto free = formula.free_variables();
  for (std::uint32_t i = 0; i < free.size(); ++i) position[free[i]] = i;
  std::vector<LaneCnf> disjuncts;
  for (const auto& conj : formula.disjuncts) {
    if (std::any_of(conj.begin(), conj.end(), [](const PropClause& c) { return c.empty(); })) continue;
    LaneCnf cnf;
    for (const auto& clause : conj) {
      LaneClause lc;
      for (Literal l : clause) lc.push_back({position[var_of(l)], l < 0});
      cnf.push_back(std::move(lc));
    }
    disjuncts.push_back(std::move(cnf));
  }
  CountReport report;
  report.method = "brute";
  report.count = count_lanes(disjuncts, free.size());
  report.elapsed_seconds = watch.seconds();
  return report;
}

CountReport count_bruteforce(const MonotoneCnf& formula) {
  Stopwatch watch;
  validate(formula);
  guard(formula.num_vars);
  LaneCnf cnf;
  for (const auto& clause : formula.clauses) {
    LaneClause lc;
    for (auto v : clause) lc.push_back({v - 1, false});
    cnf.push_back(std::move(lc));
  }
  CountReport report;
  report.method = "brute";
  report.count = count_lanes({cnf}, formula.num_vars);
  report.elapsed_seconds = watch.seconds();
  return report;
}

Disj2SatFormula restrict(const Disj2SatFormula& formula, std::uint32_t var, bool value) {
  if (!formula.is_free(var))
    throw Error("propcount.range", "variable " + std::to_string(var) + " is out of range or already fixed");
  const Literal truth = value ? static_cast<Literal>(var) : -static_cast<Literal>(var);
  Disj2SatFormula out;
  out.num_vars = formula.num_vars;
  out.fixed = formula.fixed;
  out.fixed.insert(std::lower_bound(out.fixed.begin(), out.fixed.end(), var), var);
  out.disjuncts.reserve(formula.disjuncts.size());
  for (const auto& conj : formula.disjuncts) {
    TwoSatConjunct next;
    next.reserve(conj.size());
    for (const auto& clause : conj) {
      if (std::find(clause.begin(), clause.end(), truth) != clause.end()) continue;
      PropClause kept;
      for (Literal l : clause)
        if (var_of(l) != var) kept.push_back(l);
      next.push_back(std::move(kept));
    }
    out.disjuncts.push_back(std::move(next));
  }
  return out;
}

namespace {

std::uint64_t selfreduce(const Disj2SatFormula& formula, std::uint64_t& nodes) {
  ++nodes;
  if (formula.free_count() == 0) return 1;
  const std::uint32_t var = formula.free_variables().front();
  std::uint64_t total = 0;
  for (bool value : {false, true}) {
    auto child = restrict(formula, var, value);
    if (!d2s_satisfiable(child)) continue;
    if (__builtin_add_overflow(total, selfreduce(child, nodes), &total))
      throw Error("propcount.overflow", "model count exceeds 64 bits");
  }
  return total;
}

}  // namespace

CountReport count_selfreduce(const Disj2SatFormula& formula) {
  Stopwatch watch;
  validate(formula);
  CountReport report;
  report.method = "selfreduce";
  if (!d2s_satisfiable(formula)) {
    report.nodes_explored = 1;
  } else {
    report.count = selfreduce(formula, report.nodes_explored);
  }
  report.elapsed_seconds = watch.seconds();
  return report;
}

}  // namespace qsocount
