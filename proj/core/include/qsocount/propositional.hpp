#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qsocount {

// Nonzero DIMACS-style literal: +v or -v for variable v >= 1.
using Literal = std::int32_t;

inline std::uint32_t var_of(Literal l) { return static_cast<std::uint32_t>(l < 0 ? -l : l); }

// At most two literals; an empty clause is the falsum. Kept in canonical
// order (ascending by variable, negative first) with duplicates merged.
using PropClause = std::vector<Literal>;

// A conjunction of 2-clauses. No clauses means true.
using TwoSatConjunct = std::vector<PropClause>;

// Sorts the literals of a clause and merges a repeated literal.
PropClause canonical_clause(PropClause clause);

// Disjunction of 2SAT conjuncts over variables 1..num_vars. Models are
// counted over the declared variables that have not been fixed by restrict().
struct Disj2SatFormula {
  std::uint32_t num_vars = 0;
  std::vector<TwoSatConjunct> disjuncts;
  std::vector<std::uint32_t> fixed;  // ascending

  bool is_free(std::uint32_t var) const;
  std::vector<std::uint32_t> free_variables() const;
  std::size_t free_count() const { return num_vars - fixed.size(); }
  bool operator==(const Disj2SatFormula&) const = default;
};

// Throws propcount.range on a literal outside 1..num_vars or over a fixed
// variable, or a clause with more than two literals.
void validate(const Disj2SatFormula& formula);

// CNF with positive literals only.
struct MonotoneCnf {
  std::uint32_t num_vars = 0;
  std::vector<std::vector<std::uint32_t>> clauses;  // each nonempty
  bool operator==(const MonotoneCnf&) const = default;
};

// Throws propcount.range / propcount.format.
void validate(const MonotoneCnf& formula);

// Format:
//   p d2s V k
//   d m          (k blocks)
//   l1 l2 0      (m clause lines; 1-2 literals, a bare 0 is the empty clause)
// Lines starting with `c` are comments. Throws ParseError(propcount.format).
Disj2SatFormula parse_d2s(std::string_view text);
// Canonical text; unit clauses are written with the literal repeated.
std::string serialize_d2s(const Disj2SatFormula& formula);

// DIMACS `p cnf V m`; rejects negative literals and empty clauses.
MonotoneCnf parse_monotone_dimacs(std::string_view text);
std::string serialize_monotone_dimacs(const MonotoneCnf& formula);

enum class PropFormat { D2s, Cnf };
// Looks at the `p` header line. Throws ParseError(propcount.format).
PropFormat detect_format(std::string_view text);

}  // namespace qsocount
