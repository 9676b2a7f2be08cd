#pragma once

#include <cstdint>

#include "qsocount/model.hpp"
#include "qsocount/qso.hpp"

namespace qsocount {

// Constants are expanded into that many unit terms; larger ones are rejected.
inline constexpr std::uint64_t kMaxExpandedConstant = 4096;

// Rewrites a sentence into a sum of terms over one shared second-order
// variable list, preserving its value on every structure:
//   - Plus is flattened and distributed out of binders;
//   - second-order sums are hoisted above first-order sums in each term;
//   - a constant s becomes s copies of Sum K . forall u . [K(u) | bot | bot],
//     whose only model is the full relation;
//   - a term lacking some X of arity r gets fresh forall u1..ur and the clause
//     X(u1..ur) | bot | bot, forcing the full relation.
// Fresh names avoid every name in the formula and in `vocabulary`.
// Throws logic.free_variable, logic.fragment, logic.shadowing, logic.arity.
SumNormalForm normalize_qso(const Qso& sentence, const Vocabulary& vocabulary = {});

}  // namespace qsocount
