#pragma once

#include <cstdint>
#include <string>

#include "qsocount/approx.hpp"
#include "qsocount/model.hpp"
#include "qsocount/propositional.hpp"
#include "qsocount/qso.hpp"
#include "qsocount/random.hpp"
#include "qsocount/reductions.hpp"

// Random instance generators. Every generator draws only from the Rng it is
// given, so an instance is a function of its seed. The distributions are
// documented in docs/generators.md.

namespace qsocount::gen {

// Vocabulary {P/1, E/2} shared by the formula generators.
Vocabulary default_vocabulary();

// Universe size uniform in [min_size, max_size]; every tuple of every
// relation is present independently with probability 1/2.
Structure structure(Rng& rng, const Vocabulary& vocabulary, std::size_t min_size, std::size_t max_size);

// Quantifier-free-or-shallow first-order formula over `vars`: a disjunction of
// 1-2 literals (atoms of P, E, equalities, top, bot, each negated w.p. 1/2);
// with probability 1/8 one literal is replaced by exists w . (literal over w
// and vars). Uses `fresh` to name the bound variable.
Fo fo_formula(Rng& rng, const std::vector<std::string>& vars, int& fresh);

struct QsoShape {
  unsigned max_terms = 2;           // Plus-connected terms, uniform in [1, max_terms]
  unsigned max_so_vars = 2;         // pool size; arities uniform in {1, 2}
  unsigned max_fo_sums = 1;
  unsigned max_exists = 1;
  unsigned max_forall = 2;
  unsigned max_clauses = 3;
  std::uint64_t max_constant = 2;   // a Const term appears w.p. 1/4
};

// Sentence in the sum-of-terms fragment. Each term is a random interleaving of
// its second-order binders (a random subset of the pool) and first-order
// sums above a Base formula; clauses hold 0-2 second-order literals (w.p.
// 1/3 each for 0, 1, 2) and 1-3 first-order parts.
Qso qso_sentence(Rng& rng, const QsoShape& shape = {});

// Pi2 spec with arity k uniform in {1, 2}, 0-2 universal variables, k
// existential variables and a random first-order part (top w.p. 1/8).
Pi2Spec pi2_spec(Rng& rng);

// V uniform in [1, max_vars]; disjunct count uniform in [0, max_disjuncts];
// clause count per disjunct uniform in [0, min(V + 2, max_clauses)]; clause
// length 0 w.p. 1/32, 1 w.p. 7/32, else 2; variables uniform, signs fair.
Disj2SatFormula d2s(Rng& rng, std::uint32_t max_vars, std::uint32_t max_disjuncts = 4,
                    std::uint32_t max_clauses = UINT32_MAX);

// One conjunct over variables 1..num_vars with clause count uniform in
// [0, 2 num_vars], clause lengths distributed as in d2s().
TwoSatConjunct two_sat_conjunct(Rng& rng, std::uint32_t num_vars);

// V uniform in [1, max_vars]; 1-5 clauses of 1-3 distinct variables.
MonotoneCnf monotone_cnf(Rng& rng, std::uint32_t max_vars);

// Simple graph with n uniform in [2, max_vertices] and each pair an edge
// w.p. 1/2, resampled until at least one edge exists.
Graph graph(Rng& rng, std::uint32_t max_vertices);

// accept(i) iff i < accepted.
CountingSampler threshold_sampler(std::uint64_t domain_size, std::uint64_t accepted, bool promised_mr = true);

}  // namespace qsocount::gen
