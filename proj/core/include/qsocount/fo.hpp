#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qsocount/box.hpp"

namespace qsocount {

struct FoFormula;
using Fo = Box<FoFormula>;

namespace fo_node {
struct Top {
  bool operator==(const Top&) const = default;
};
struct Bottom {
  bool operator==(const Bottom&) const = default;
};
struct Eq {
  std::string lhs, rhs;
  bool operator==(const Eq&) const = default;
};
struct Atom {
  std::string relation;
  std::vector<std::string> args;
  bool operator==(const Atom&) const = default;
};
struct Not {
  Fo body;
  bool operator==(const Not&) const = default;
};
struct Or {
  Fo lhs, rhs;
  bool operator==(const Or&) const = default;
};
struct Exists {
  std::string var;
  Fo body;
  bool operator==(const Exists&) const = default;
};
// Sugar, removed by lower().
struct And {
  Fo lhs, rhs;
  bool operator==(const And&) const = default;
};
struct Implies {
  Fo lhs, rhs;
  bool operator==(const Implies&) const = default;
};
struct Forall {
  std::string var;
  Fo body;
  bool operator==(const Forall&) const = default;
};
}  // namespace fo_node

struct FoFormula {
  using Node = std::variant<fo_node::Top, fo_node::Bottom, fo_node::Eq, fo_node::Atom,
                            fo_node::Not, fo_node::Or, fo_node::Exists, fo_node::And,
                            fo_node::Implies, fo_node::Forall>;
  Node node;

  bool operator==(const FoFormula&) const = default;
};

namespace fo {
Fo top();
Fo bottom();
Fo eq(std::string lhs, std::string rhs);
Fo atom(std::string relation, std::vector<std::string> args);
Fo negate(Fo body);
Fo disj(Fo lhs, Fo rhs);
Fo exists(std::string var, Fo body);
Fo conj(Fo lhs, Fo rhs);
Fo implies(Fo lhs, Fo rhs);
Fo forall(std::string var, Fo body);
// Left-nested disjunction; bottom() when empty.
Fo disj_all(const std::vector<Fo>& parts);
}  // namespace fo

// Rewrites And/Implies/Forall into Not/Or/Exists. Idempotent.
Fo lower(const Fo& formula);
bool is_core(const Fo& formula);
// Quantifier-free atom, equality, constant, or a negation of one of those.
bool is_literal(const Fo& formula);

std::set<std::string> free_variables(const Fo& formula);
// Every variable name that occurs, bound or free.
void collect_variables(const Fo& formula, std::set<std::string>& out);

}  // namespace qsocount
