#include "qsocount/qso.hpp"

#include <algorithm>
#include <map>

#include "qsocount/error.hpp"

namespace qsocount {

namespace qso {
Qso base(Sigma2TwoSatFormula formula) { return QsoFormula{qso_node::Base{std::move(formula)}}; }
Qso constant(std::uint64_t value) { return QsoFormula{qso_node::Const{value}}; }
Qso plus(Qso lhs, Qso rhs) { return QsoFormula{qso_node::Plus{std::move(lhs), std::move(rhs)}}; }
Qso sum_fo(std::string var, Qso body) { return QsoFormula{qso_node::SumFo{std::move(var), std::move(body)}}; }
Qso sum_so(std::string var, unsigned arity, Qso body) {
  return QsoFormula{qso_node::SumSo{std::move(var), arity, std::move(body)}};
}
}  // namespace qso

void validate_clause(const TwoSatClause& clause) {
  int so = 0;
  for (const auto& part : clause.parts) {
    if (std::holds_alternative<SoLiteral>(part)) {
      ++so;
    } else if (!std::get<Fo>(part)) {
      throw Error("logic.shape", "clause has an empty first-order part");
    }
  }
  if (so > 2)
    throw Error("logic.shape", "clause has " + std::to_string(so) +
                                   " second-order literals; at most 2 are allowed and at least one "
                                   "part must be first-order");
}

namespace {

using Scope = std::vector<std::string>;

bool in_scope(const Scope& scope, const std::string& name) {
  return std::find(scope.begin(), scope.end(), name) != scope.end();
}

void check_fo_binders(const Fo& f, Scope& scope) {
  using namespace fo_node;
  auto bind = [&](const std::string& var, const Fo& body) {
    if (in_scope(scope, var))
      throw Error("logic.shadowing", "variable '" + var + "' is bound twice on one path");
    scope.push_back(var);
    check_fo_binders(body, scope);
    scope.pop_back();
  };
  std::visit(Overloaded{
                 [&](const Not& n) { check_fo_binders(n.body, scope); },
                 [&](const Or& n) {
                   check_fo_binders(n.lhs, scope);
                   check_fo_binders(n.rhs, scope);
                 },
                 [&](const And& n) {
                   check_fo_binders(n.lhs, scope);
                   check_fo_binders(n.rhs, scope);
                 },
                 [&](const Implies& n) {
                   check_fo_binders(n.lhs, scope);
                   check_fo_binders(n.rhs, scope);
                 },
                 [&](const Exists& n) { bind(n.var, n.body); },
                 [&](const Forall& n) { bind(n.var, n.body); },
                 [](const auto&) {},
             },
             f->node);
}

void bind_list(Scope& scope, const std::vector<std::string>& vars) {
  for (const auto& v : vars) {
    if (in_scope(scope, v))
      throw Error("logic.shadowing", "variable '" + v + "' is bound twice on one path");
    scope.push_back(v);
  }
}

struct SoScope {
  std::vector<SoVarDecl> bound;
  std::map<std::string, unsigned> free_arity;

  const SoVarDecl* find(const std::string& name) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
};

void check_so_use(const SoLiteral& lit, SoScope& so) {
  unsigned arity = static_cast<unsigned>(lit.args.size());
  if (const auto* decl = so.find(lit.var)) {
    if (decl->arity != arity)
      throw Error("logic.arity", "second-order variable '" + lit.var + "' has arity " +
                                     std::to_string(decl->arity) + " but is applied to " +
                                     std::to_string(arity) + " arguments");
    return;
  }
  auto [it, inserted] = so.free_arity.emplace(lit.var, arity);
  if (!inserted && it->second != arity)
    throw Error("logic.arity", "free second-order variable '" + lit.var + "' used with arities " +
                                   std::to_string(it->second) + " and " + std::to_string(arity));
}

void discipline(const Qso& f, Scope& fo_scope, SoScope& so) {
  using namespace qso_node;
  std::visit(Overloaded{
                 [&](const Base& n) {
                   std::size_t mark = fo_scope.size();
                   bind_list(fo_scope, n.formula.exists_vars);
                   bind_list(fo_scope, n.formula.forall_vars);
                   for (const auto& clause : n.formula.clauses) {
                     validate_clause(clause);
                     for (const auto& part : clause.parts) {
                       if (const auto* lit = std::get_if<SoLiteral>(&part))
                         check_so_use(*lit, so);
                       else
                         check_fo_binders(std::get<Fo>(part), fo_scope);
                     }
                   }
                   fo_scope.resize(mark);
                 },
                 [&](const Const&) {},
                 [&](const Plus& n) {
                   discipline(n.lhs, fo_scope, so);
                   discipline(n.rhs, fo_scope, so);
                 },
                 [&](const SumFo& n) {
                   bind_list(fo_scope, {n.var});
                   discipline(n.body, fo_scope, so);
                   fo_scope.pop_back();
                 },
                 [&](const SumSo& n) {
                   if (so.find(n.var))
                     throw Error("logic.shadowing",
                                 "second-order variable '" + n.var + "' is bound twice on one path");
                   if (n.arity == 0)
                     throw Error("logic.arity", "second-order variable '" + n.var + "' has arity 0");
                   so.bound.push_back({n.var, n.arity});
                   discipline(n.body, fo_scope, so);
                   so.bound.pop_back();
                 },
             },
             f->node);
}

void free_in(const Qso& f, Scope& fo_scope, std::vector<std::string>& so_scope, SentenceCheck& out) {
  using namespace qso_node;
  std::visit(Overloaded{
                 [&](const Base& n) {
                   std::size_t mark = fo_scope.size();
                   fo_scope.insert(fo_scope.end(), n.formula.exists_vars.begin(), n.formula.exists_vars.end());
                   fo_scope.insert(fo_scope.end(), n.formula.forall_vars.begin(), n.formula.forall_vars.end());
                   for (const auto& clause : n.formula.clauses) {
                     for (const auto& part : clause.parts) {
                       if (const auto* lit = std::get_if<SoLiteral>(&part)) {
                         if (!in_scope(so_scope, lit->var)) out.free_so.insert(lit->var);
                         for (const auto& a : lit->args)
                           if (!in_scope(fo_scope, a)) out.free_fo.insert(a);
                       } else {
                         for (const auto& v : free_variables(std::get<Fo>(part)))
                           if (!in_scope(fo_scope, v)) out.free_fo.insert(v);
                       }
                     }
                   }
                   fo_scope.resize(mark);
                 },
                 [&](const Const&) {},
                 [&](const Plus& n) {
                   free_in(n.lhs, fo_scope, so_scope, out);
                   free_in(n.rhs, fo_scope, so_scope, out);
                 },
                 [&](const SumFo& n) {
                   fo_scope.push_back(n.var);
                   free_in(n.body, fo_scope, so_scope, out);
                   fo_scope.pop_back();
                 },
                 [&](const SumSo& n) {
                   so_scope.push_back(n.var);
                   free_in(n.body, fo_scope, so_scope, out);
                   so_scope.pop_back();
                 },
             },
             f->node);
}

}  // namespace

SentenceCheck check_sentence(const Qso& formula) {
  SentenceCheck out;
  Scope fo_scope;
  std::vector<std::string> so_scope;
  free_in(formula, fo_scope, so_scope, out);
  return out;
}

void check_binding_discipline(const Qso& formula) {
  Scope fo_scope;
  SoScope so;
  discipline(formula, fo_scope, so);
}

Qso SumNormalForm::to_qso() const {
  if (terms.empty()) return qso::constant(0);
  Qso sum;
  for (const auto& term : terms) {
    Qso t = qso::base({term.exists_vars, term.forall_vars, term.clauses});
    for (auto it = term.fo_sum_vars.rbegin(); it != term.fo_sum_vars.rend(); ++it) t = qso::sum_fo(*it, t);
    for (auto it = term.so_vars.rbegin(); it != term.so_vars.rend(); ++it) t = qso::sum_so(it->name, it->arity, t);
    sum = sum ? qso::plus(sum, t) : t;
  }
  return sum;
}

void validate_pi2(const Pi2Spec& spec) {
  if (spec.so_var.arity == 0) throw Error("logic.arity", "second-order variable must have arity >= 1");
  if (spec.exists_vars.size() != spec.so_var.arity)
    throw Error("logic.shape", "existential block has " + std::to_string(spec.exists_vars.size()) +
                                   " variables but " + spec.so_var.name + " has arity " +
                                   std::to_string(spec.so_var.arity));
  if (!spec.fo_part) throw Error("logic.shape", "missing first-order part");
  Scope scope;
  bind_list(scope, spec.forall_vars);
  bind_list(scope, spec.exists_vars);
  for (const auto& v : free_variables(spec.fo_part))
    if (!in_scope(scope, v))
      throw Error("logic.free_variable", "variable '" + v + "' is free in the first-order part");
  check_fo_binders(spec.fo_part, scope);
}

void validate_rh(const RhPi1Formula& f) {
  std::vector<std::string> so_names;
  for (const auto& d : f.so_vars) {
    if (in_scope(so_names, d.name))
      throw Error("logic.shadowing", "second-order variable '" + d.name + "' declared twice");
    if (d.arity == 0) throw Error("logic.arity", "second-order variable '" + d.name + "' has arity 0");
    so_names.push_back(d.name);
  }
  Scope scope;
  bind_list(scope, f.fo_count_vars);
  bind_list(scope, f.forall_vars);
  auto check_lit = [&](const SoLiteral& lit, bool positive) {
    if (lit.positive != positive) throw Error("logic.shape", "misfiled second-order literal polarity");
    auto it = std::find_if(f.so_vars.begin(), f.so_vars.end(),
                           [&](const SoVarDecl& d) { return d.name == lit.var; });
    if (it == f.so_vars.end())
      throw Error("logic.free_variable", "second-order variable '" + lit.var + "' is not declared");
    if (it->arity != lit.args.size())
      throw Error("logic.arity", "second-order variable '" + lit.var + "' has arity " +
                                     std::to_string(it->arity));
    for (const auto& a : lit.args)
      if (!in_scope(scope, a)) throw Error("logic.free_variable", "variable '" + a + "' is free");
  };
  for (const auto& clause : f.clauses) {
    if (clause.fo_literals.empty() && clause.pos_so.empty() && clause.neg_so.empty())
      throw Error("logic.shape", "empty restricted-Horn clause; write {bot} instead");
    if (clause.pos_so.size() > 1)
      throw Error("logic.shape", "restricted-Horn clause has more than one unnegated second-order literal");
    if (clause.neg_so.size() > 1)
      throw Error("logic.shape", "restricted-Horn clause has more than one negated second-order literal");
    for (const auto& lit : clause.pos_so) check_lit(lit, true);
    for (const auto& lit : clause.neg_so) check_lit(lit, false);
    for (const auto& lit : clause.fo_literals) {
      if (!lit || !is_literal(lit)) throw Error("logic.shape", "restricted-Horn clause entry is not a literal");
      for (const auto& v : free_variables(lit))
        if (!in_scope(scope, v)) throw Error("logic.free_variable", "variable '" + v + "' is free");
    }
  }
}

Qso rh_to_qso(const RhPi1Formula& f) {
  validate_rh(f);
  Sigma2TwoSatFormula body;
  body.forall_vars = f.forall_vars;
  for (const auto& clause : f.clauses) {
    std::vector<ClauseEntry> entries;
    entries.emplace_back(fo::disj_all(clause.fo_literals));
    for (const auto& lit : clause.neg_so) entries.emplace_back(lit);
    for (const auto& lit : clause.pos_so) entries.emplace_back(lit);
    while (entries.size() < 3) entries.emplace_back(fo::bottom());
    body.clauses.push_back(TwoSatClause{{entries[0], entries[1], entries[2]}});
  }
  Qso result = qso::base(std::move(body));
  for (auto it = f.fo_count_vars.rbegin(); it != f.fo_count_vars.rend(); ++it) result = qso::sum_fo(*it, result);
  for (auto it = f.so_vars.rbegin(); it != f.so_vars.rend(); ++it) result = qso::sum_so(it->name, it->arity, result);
  return result;
}

}  // namespace qsocount
