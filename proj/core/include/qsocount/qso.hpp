#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qsocount/box.hpp"
#include "qsocount/fo.hpp"

namespace qsocount {

// X(x1,...,xk) or ~X(x1,...,xk) for a second-order variable X.
struct SoLiteral {
  bool positive = true;
  std::string var;
  std::vector<std::string> args;

  bool operator==(const SoLiteral&) const = default;
};

using ClauseEntry = std::variant<SoLiteral, Fo>;

// phi1 | phi2 | phi3 with at most two second-order literals and at least one
// first-order part.
struct TwoSatClause {
  std::array<ClauseEntry, 3> parts;

  bool operator==(const TwoSatClause&) const = default;
};

// Throws logic.shape when the clause violates the two-literal rule.
void validate_clause(const TwoSatClause& clause);

// exists xs . forall ys . C1 & ... & Ck
struct Sigma2TwoSatFormula {
  std::vector<std::string> exists_vars;
  std::vector<std::string> forall_vars;
  std::vector<TwoSatClause> clauses;

  bool operator==(const Sigma2TwoSatFormula&) const = default;
};

struct QsoFormula;
using Qso = Box<QsoFormula>;

namespace qso_node {
struct Base {
  Sigma2TwoSatFormula formula;
  bool operator==(const Base&) const = default;
};
struct Const {
  std::uint64_t value = 0;
  bool operator==(const Const&) const = default;
};
struct Plus {
  Qso lhs, rhs;
  bool operator==(const Plus&) const = default;
};
struct SumFo {
  std::string var;
  Qso body;
  bool operator==(const SumFo&) const = default;
};
struct SumSo {
  std::string var;
  unsigned arity = 1;
  Qso body;
  bool operator==(const SumSo&) const = default;
};
}  // namespace qso_node

struct QsoFormula {
  using Node = std::variant<qso_node::Base, qso_node::Const, qso_node::Plus, qso_node::SumFo,
                            qso_node::SumSo>;
  Node node;

  bool operator==(const QsoFormula&) const = default;
};

namespace qso {
Qso base(Sigma2TwoSatFormula formula);
Qso constant(std::uint64_t value);
Qso plus(Qso lhs, Qso rhs);
Qso sum_fo(std::string var, Qso body);
Qso sum_so(std::string var, unsigned arity, Qso body);
}  // namespace qso

struct SentenceCheck {
  std::set<std::string> free_fo;
  std::set<std::string> free_so;

  bool ok() const { return free_fo.empty() && free_so.empty(); }
};

// Reports the free first- and second-order variables of a formula.
SentenceCheck check_sentence(const Qso& formula);

// Throws logic.shadowing when a binder reuses a name already bound on its
// path, or logic.arity when a second-order variable is used at two arities.
void check_binding_discipline(const Qso& formula);

struct SoVarDecl {
  std::string name;
  unsigned arity = 1;

  bool operator==(const SoVarDecl&) const = default;
};

// Sum X . Sum x . exists y . forall z . C1 & ... & Cn
struct NormalTerm {
  std::vector<SoVarDecl> so_vars;
  std::vector<std::string> fo_sum_vars;
  std::vector<std::string> exists_vars;
  std::vector<std::string> forall_vars;
  std::vector<TwoSatClause> clauses;

  bool operator==(const NormalTerm&) const = default;
};

// A plain sum of normal terms sharing one second-order variable list. No
// terms means the value 0.
struct SumNormalForm {
  std::vector<NormalTerm> terms;

  Qso to_qso() const;
  bool operator==(const SumNormalForm&) const = default;
};

// forall ys . exists zs . phi(ys, zs) & X(zs)
struct Pi2Spec {
  SoVarDecl so_var;
  std::vector<std::string> forall_vars;
  std::vector<std::string> exists_vars;  // length equals so_var.arity
  Fo fo_part;

  bool operator==(const Pi2Spec&) const = default;
};

// Throws logic.shape / logic.free_variable / logic.shadowing.
void validate_pi2(const Pi2Spec& spec);

struct RhClause {
  std::vector<Fo> fo_literals;
  std::vector<SoLiteral> pos_so;  // at most one
  std::vector<SoLiteral> neg_so;  // at most one

  bool operator==(const RhClause&) const = default;
};

// Count <Xs, xs> with A |= forall ys . psi, psi a restricted-Horn CNF.
struct RhPi1Formula {
  std::vector<SoVarDecl> so_vars;
  std::vector<std::string> fo_count_vars;
  std::vector<std::string> forall_vars;
  std::vector<RhClause> clauses;

  bool operator==(const RhPi1Formula&) const = default;
};

void validate_rh(const RhPi1Formula& formula);

// Sum Xs . Sum xs . exists . forall ys . (clauses as three-part clauses).
Qso rh_to_qso(const RhPi1Formula& formula);

}  // namespace qsocount
