#include <sstream>

#include "qsocount/syntax.hpp"

namespace qsocount {

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string var_block(const char* keyword, const std::vector<std::string>& vars) {
  std::string out = keyword;
  for (const auto& v : vars) out += " " + v;
  return out + " .";
}

std::string print_entry(const ClauseEntry& e) {
  if (const auto* lit = std::get_if<SoLiteral>(&e)) return print(*lit);
  const Fo& f = std::get<Fo>(e);
  if (std::holds_alternative<fo_node::Top>(f->node)) return "top";
  if (std::holds_alternative<fo_node::Bottom>(f->node)) return "bot";
  return "{" + print(f) + "}";
}

std::string print_qso(const Qso& f, bool as_rhs);

std::string print_body(const Qso& body) {
  // A binder body is a single term; sums need parentheses.
  if (std::holds_alternative<qso_node::Plus>(body->node)) return "(" + print_qso(body, false) + ")";
  return print_qso(body, false);
}

std::string print_qso(const Qso& f, bool as_rhs) {
  using namespace qso_node;
  return std::visit(Overloaded{
                        [](const Base& n) { return print(n.formula); },
                        [](const Const& n) { return std::to_string(n.value); },
                        [&](const Plus& n) {
                          std::string s = print_qso(n.lhs, false) + " + " + print_qso(n.rhs, true);
                          return as_rhs ? "(" + s + ")" : s;
                        },
                        [](const SumFo& n) { return "sumfo " + n.var + " . " + print_body(n.body); },
                        [](const SumSo& n) {
                          return "sum " + n.var + ":" + std::to_string(n.arity) + " . " + print_body(n.body);
                        },
                    },
                    f->node);
}

}  // namespace

std::string print(const Fo& f) {
  using namespace fo_node;
  return std::visit(Overloaded{
                        [](const Top&) -> std::string { return "top"; },
                        [](const Bottom&) -> std::string { return "bot"; },
                        [](const Eq& n) { return n.lhs + " = " + n.rhs; },
                        [](const Atom& n) { return n.relation + "(" + join(n.args, ",") + ")"; },
                        [](const Not& n) { return "~" + print(n.body); },
                        [](const Or& n) { return "(" + print(n.lhs) + " | " + print(n.rhs) + ")"; },
                        [](const And& n) { return "(" + print(n.lhs) + " & " + print(n.rhs) + ")"; },
                        [](const Implies& n) { return "(" + print(n.lhs) + " -> " + print(n.rhs) + ")"; },
                        [](const Exists& n) { return "(exists " + n.var + " . " + print(n.body) + ")"; },
                        [](const Forall& n) { return "(forall " + n.var + " . " + print(n.body) + ")"; },
                    },
                    f->node);
}

std::string print(const SoLiteral& lit) {
  return (lit.positive ? "" : "~") + lit.var + "(" + join(lit.args, ",") + ")";
}

std::string print(const TwoSatClause& c) {
  return print_entry(c.parts[0]) + " | " + print_entry(c.parts[1]) + " | " + print_entry(c.parts[2]);
}

std::string print(const Sigma2TwoSatFormula& f) {
  std::vector<std::string> clauses;
  for (const auto& c : f.clauses) clauses.push_back(print(c));
  std::string body = clauses.empty() ? "[ ]" : "[ " + join(clauses, " ; ") + " ]";
  return var_block("exists", f.exists_vars) + " " + var_block("forall", f.forall_vars) + " " + body;
}

std::string print(const Qso& f) { return print_qso(f, false); }

std::string print(const Pi2Spec& s) {
  SoLiteral lit{true, s.so_var.name, s.exists_vars};
  return "pivar " + s.so_var.name + ":" + std::to_string(s.so_var.arity) + " . " +
         var_block("forall", s.forall_vars) + " " + var_block("exists", s.exists_vars) + " {" +
         print(s.fo_part) + "} & " + print(lit);
}

std::string print(const RhPi1Formula& f) {
  std::string out = "rhpi1";
  for (const auto& d : f.so_vars) out += " " + d.name + ":" + std::to_string(d.arity);
  out += " . " + var_block("count", f.fo_count_vars) + " " + var_block("forall", f.forall_vars) + " ";
  std::vector<std::string> clauses;
  for (const auto& c : f.clauses) {
    std::vector<std::string> entries;
    for (const auto& l : c.fo_literals) entries.push_back(print_entry(l));
    for (const auto& l : c.neg_so) entries.push_back(print(l));
    for (const auto& l : c.pos_so) entries.push_back(print(l));
    clauses.push_back(join(entries, " | "));
  }
  out += clauses.empty() ? "[ ]" : "[ " + join(clauses, " ; ") + " ]";
  return out;
}

}  // namespace qsocount
