#include "qsocount/fo.hpp"

namespace qsocount {

namespace fo {
Fo top() { return FoFormula{fo_node::Top{}}; }
Fo bottom() { return FoFormula{fo_node::Bottom{}}; }
Fo eq(std::string lhs, std::string rhs) { return FoFormula{fo_node::Eq{std::move(lhs), std::move(rhs)}}; }
Fo atom(std::string relation, std::vector<std::string> args) {
  return FoFormula{fo_node::Atom{std::move(relation), std::move(args)}};
}
Fo negate(Fo body) { return FoFormula{fo_node::Not{std::move(body)}}; }
Fo disj(Fo lhs, Fo rhs) { return FoFormula{fo_node::Or{std::move(lhs), std::move(rhs)}}; }
Fo exists(std::string var, Fo body) { return FoFormula{fo_node::Exists{std::move(var), std::move(body)}}; }
Fo conj(Fo lhs, Fo rhs) { return FoFormula{fo_node::And{std::move(lhs), std::move(rhs)}}; }
Fo implies(Fo lhs, Fo rhs) { return FoFormula{fo_node::Implies{std::move(lhs), std::move(rhs)}}; }
Fo forall(std::string var, Fo body) { return FoFormula{fo_node::Forall{std::move(var), std::move(body)}}; }

Fo disj_all(const std::vector<Fo>& parts) {
  if (parts.empty()) return bottom();
  Fo result = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) result = disj(result, parts[i]);
  return result;
}
}  // namespace fo

Fo lower(const Fo& f) {
  using namespace fo_node;
  return std::visit(
      Overloaded{
          [&](const Top&) { return f; },
          [&](const Bottom&) { return f; },
          [&](const Eq&) { return f; },
          [&](const Atom&) { return f; },
          [](const Not& n) { return fo::negate(lower(n.body)); },
          [](const Or& n) { return fo::disj(lower(n.lhs), lower(n.rhs)); },
          [](const Exists& n) { return fo::exists(n.var, lower(n.body)); },
          [](const And& n) {
            return fo::negate(fo::disj(fo::negate(lower(n.lhs)), fo::negate(lower(n.rhs))));
          },
          [](const Implies& n) { return fo::disj(fo::negate(lower(n.lhs)), lower(n.rhs)); },
          [](const Forall& n) { return fo::negate(fo::exists(n.var, fo::negate(lower(n.body)))); },
      },
      f->node);
}

bool is_core(const Fo& f) {
  using namespace fo_node;
  return std::visit(Overloaded{
                        [](const Not& n) { return is_core(n.body); },
                        [](const Or& n) { return is_core(n.lhs) && is_core(n.rhs); },
                        [](const Exists& n) { return is_core(n.body); },
                        [](const And&) { return false; },
                        [](const Implies&) { return false; },
                        [](const Forall&) { return false; },
                        [](const auto&) { return true; },
                    },
                    f->node);
}

bool is_literal(const Fo& f) {
  auto is_atomic = [](const Fo& g) {
    return std::holds_alternative<fo_node::Atom>(g->node) ||
           std::holds_alternative<fo_node::Eq>(g->node) ||
           std::holds_alternative<fo_node::Top>(g->node) ||
           std::holds_alternative<fo_node::Bottom>(g->node);
  };
  if (auto* n = std::get_if<fo_node::Not>(&f->node)) return is_atomic(n->body);
  return is_atomic(f);
}

namespace {

void free_vars_into(const Fo& f, std::set<std::string>& bound, std::set<std::string>& out) {
  using namespace fo_node;
  auto use = [&](const std::string& v) {
    if (!bound.count(v)) out.insert(v);
  };
  auto bind = [&](const std::string& var, const Fo& body) {
    bool fresh = bound.insert(var).second;
    free_vars_into(body, bound, out);
    if (fresh) bound.erase(var);
  };
  std::visit(Overloaded{
                 [&](const Top&) {},
                 [&](const Bottom&) {},
                 [&](const Eq& n) {
                   use(n.lhs);
                   use(n.rhs);
                 },
                 [&](const Atom& n) {
                   for (const auto& a : n.args) use(a);
                 },
                 [&](const Not& n) { free_vars_into(n.body, bound, out); },
                 [&](const Or& n) {
                   free_vars_into(n.lhs, bound, out);
                   free_vars_into(n.rhs, bound, out);
                 },
                 [&](const And& n) {
                   free_vars_into(n.lhs, bound, out);
                   free_vars_into(n.rhs, bound, out);
                 },
                 [&](const Implies& n) {
                   free_vars_into(n.lhs, bound, out);
                   free_vars_into(n.rhs, bound, out);
                 },
                 [&](const Exists& n) { bind(n.var, n.body); },
                 [&](const Forall& n) { bind(n.var, n.body); },
             },
             f->node);
}

}  // namespace

std::set<std::string> free_variables(const Fo& formula) {
  std::set<std::string> bound, out;
  free_vars_into(formula, bound, out);
  return out;
}

void collect_variables(const Fo& f, std::set<std::string>& out) {
  using namespace fo_node;
  std::visit(Overloaded{
                 [&](const Top&) {},
                 [&](const Bottom&) {},
                 [&](const Eq& n) {
                   out.insert(n.lhs);
                   out.insert(n.rhs);
                 },
                 [&](const Atom& n) { out.insert(n.args.begin(), n.args.end()); },
                 [&](const Not& n) { collect_variables(n.body, out); },
                 [&](const Or& n) {
                   collect_variables(n.lhs, out);
                   collect_variables(n.rhs, out);
                 },
                 [&](const And& n) {
                   collect_variables(n.lhs, out);
                   collect_variables(n.rhs, out);
                 },
                 [&](const Implies& n) {
                   collect_variables(n.lhs, out);
                   collect_variables(n.rhs, out);
                 },
                 [&](const Exists& n) {
                   out.insert(n.var);
                   collect_variables(n.body, out);
                 },
                 [&](const Forall& n) {
                   out.insert(n.var);
                   collect_variables(n.body, out);
                 },
             },
             f->node);
}

}  // namespace qsocount
