#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsocount/eval.hpp"
#include "qsocount/model.hpp"
#include "qsocount/propositional.hpp"
#include "qsocount/qso.hpp"

namespace qsocount {

// Propositional variables of a reduced formula: one per ground atom X(a), in
// declaration order of X and then lexicographic order of a, followed by one
// selector per (term, first-order sum tuple) group.
struct AtomTable {
  struct Entry {
    std::string so_var;
    Tuple args;
  };
  std::size_t universe_size = 0;
  std::vector<SoVarDecl> so_vars;
  std::vector<Entry> atoms;                 // variable i+1 is atoms[i]
  std::vector<std::uint32_t> selectors;     // variable indices
  std::vector<std::pair<std::size_t, Tuple>> groups;  // (term, tuple) of each selector

  std::uint32_t variable_of(std::size_t so_index, std::span<const Element> args) const;
  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(atoms.size() + selectors.size()); }
};

struct D2sReduction {
  Disj2SatFormula formula;
  AtomTable table;
};

// Grounds every term over the structure and turns the sum into one
// disjunction of 2SAT conjuncts with the same number of models. Throws
// reductions.budget, reductions.empty_universe.
D2sReduction reduce_qso_to_d2s(const SumNormalForm& nf, const Structure& structure, const EvalBudget& budget = {});

// Either the grounded spec has no model, or count = count(cnf) * 2^exponent.
struct ProductResult {
  bool unsatisfiable = false;
  MonotoneCnf cnf;
  std::uint64_t exponent = 0;
  std::vector<Tuple> atoms;  // variable i+1 stands for X(atoms[i])
};

// Ground clauses are deduplicated and subsumed clauses dropped; atoms left in
// no clause are the free ones counted by the exponent.
ProductResult reduce_pi2_to_monotone(const Pi2Spec& spec, const Structure& structure, const EvalBudget& budget = {});

struct QsoEncoding {
  Structure structure;
  Qso formula;
};

// Structure over C1..C4, D, Var, Disj and the sentence
//   sum T:1 . exists d . forall c x y . [ {Disj(d)} | bot | bot ;
//     {Var(x)} | ~T(x) | bot ; {(~D(d,c) | ~C1(c,x,y))} | T(x) | T(y) ; ... ]
// whose value is the model count. Universe: variables, then clauses in
// disjunct order, then disjuncts. Throws reductions.degenerate when V = 0.
QsoEncoding encode_d2s_as_qso(const Disj2SatFormula& formula);

struct Pi2Encoding {
  Structure structure;
  Pi2Spec spec;
  std::uint64_t correction_exponent = 0;  // pi2_count = count * 2^correction
};

// Universe: clauses, then variables. Spec: forall c exists x
// ((~IsClause(c) | C(c,x)) & T(x)). Throws reductions.degenerate on zero clauses.
Pi2Encoding encode_monotone_as_pi2(const MonotoneCnf& formula);

struct Graph {
  std::uint32_t num_vertices = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // 0-based
};

// DIMACS graph text: `p edge n m` then m lines `e u v` with 1-based vertices.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& graph);

// Universe: vertices, then edges. Spec: forall x exists y
// ((~IsEdge(x) | End(y,x)) & VC(y)). Throws reductions.degenerate when edgeless.
Pi2Encoding encode_vc(const Graph& graph);

}  // namespace qsocount
