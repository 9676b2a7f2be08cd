#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "qsocount/model.hpp"
#include "qsocount/qso.hpp"

namespace qsocount {

// Concrete surface syntax for the four formula kinds. The grammar is
// documented in docs/grammar.md. Relation symbols and their arities come from
// the supplied vocabulary; second-order variables may not reuse them.

Fo parse_fo(std::string_view text, const Vocabulary& vocabulary);
Qso parse_qso(std::string_view text, const Vocabulary& vocabulary);
Pi2Spec parse_pi2(std::string_view text, const Vocabulary& vocabulary);
RhPi1Formula parse_rh(std::string_view text, const Vocabulary& vocabulary);

enum class FormulaKind { Fo, Qso, Pi2, Rh };
using AnyFormula = std::variant<Fo, Qso, Pi2Spec, RhPi1Formula>;

AnyFormula parse_formula(std::string_view text, FormulaKind kind, const Vocabulary& vocabulary);

// Canonical printers; parse(print(x)) == x.
std::string print(const Fo& formula);
std::string print(const SoLiteral& literal);
std::string print(const TwoSatClause& clause);
std::string print(const Sigma2TwoSatFormula& formula);
std::string print(const Qso& formula);
std::string print(const Pi2Spec& spec);
std::string print(const RhPi1Formula& formula);

}  // namespace qsocount
