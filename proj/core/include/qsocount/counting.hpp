#pragma once

#include <cstdint>
#include <string>

#include "qsocount/propositional.hpp"

namespace qsocount {

// Enumeration guard for the brute-force counters.
inline constexpr std::uint32_t kMaxBruteForceVars = 26;

struct CountReport {
  std::uint64_t count = 0;
  std::string method;              // "brute" or "selfreduce"
  std::uint64_t nodes_explored = 0;  // selfreduce only
  double elapsed_seconds = 0.0;
};

// Implication graph + strongly connected components. A unit clause l reads
// as l | l; an empty clause makes the conjunct unsatisfiable.
bool sat2_satisfiable(const TwoSatConjunct& conjunct, std::uint32_t num_vars);

bool d2s_satisfiable(const Disj2SatFormula& formula);

// Exhaustive count over the free declared variables, 64 assignments per
// machine word. Throws propcount.guard above kMaxBruteForceVars.
CountReport count_bruteforce(const Disj2SatFormula& formula);
CountReport count_bruteforce(const MonotoneCnf& formula);

// Fixes `var` to `value`: satisfied clauses disappear, falsified literals are
// dropped (possibly leaving the empty clause) and var leaves the variable set.
// Throws propcount.range if var is out of range or already fixed.
Disj2SatFormula restrict(const Disj2SatFormula& formula, std::uint32_t var, bool value);

// Branches on the lowest free variable, pruning unsatisfiable restrictions
// before descending. nodes_explored counts recursive calls, the root included.
CountReport count_selfreduce(const Disj2SatFormula& formula);

}  // namespace qsocount
