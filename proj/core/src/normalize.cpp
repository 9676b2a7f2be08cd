#include "qsocount/normalize.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "qsocount/error.hpp"

namespace qsocount {

namespace {

struct Leaf {
  std::vector<SoVarDecl> so_prefix;
  std::vector<std::string> fo_prefix;
  const Sigma2TwoSatFormula* base = nullptr;  // null for a constant leaf
  std::uint64_t copies = 0;
  std::map<std::string, std::string> rename;  // second-order names changed by normalization
};

void collect_leaves(const Qso& f, std::vector<SoVarDecl>& so, std::vector<std::string>& fo,
                    std::vector<Leaf>& out) {
  using namespace qso_node;
  std::visit(Overloaded{
                 [&](const Base& n) { out.push_back({so, fo, &n.formula, 0, {}}); },
                 [&](const Const& n) { out.push_back({so, fo, nullptr, n.value, {}}); },
                 [&](const Plus& n) {
                   collect_leaves(n.lhs, so, fo, out);
                   collect_leaves(n.rhs, so, fo, out);
                 },
                 [&](const SumFo& n) {
                   fo.push_back(n.var);
                   collect_leaves(n.body, so, fo, out);
                   fo.pop_back();
                 },
                 [&](const SumSo& n) {
                   so.push_back({n.var, n.arity});
                   collect_leaves(n.body, so, fo, out);
                   so.pop_back();
                 },
             },
             f->node);
}

void collect_names(const Qso& f, std::set<std::string>& names) {
  using namespace qso_node;
  std::visit(Overloaded{
                 [&](const Base& n) {
                   names.insert(n.formula.exists_vars.begin(), n.formula.exists_vars.end());
                   names.insert(n.formula.forall_vars.begin(), n.formula.forall_vars.end());
                   for (const auto& c : n.formula.clauses)
                     for (const auto& part : c.parts) {
                       if (const auto* lit = std::get_if<SoLiteral>(&part)) {
                         names.insert(lit->var);
                         names.insert(lit->args.begin(), lit->args.end());
                       } else {
                         collect_variables(std::get<Fo>(part), names);
                       }
                     }
                 },
                 [&](const Const&) {},
                 [&](const Plus& n) {
                   collect_names(n.lhs, names);
                   collect_names(n.rhs, names);
                 },
                 [&](const SumFo& n) {
                   names.insert(n.var);
                   collect_names(n.body, names);
                 },
                 [&](const SumSo& n) {
                   names.insert(n.var);
                   collect_names(n.body, names);
                 },
             },
             f->node);
}

std::string fresh(const std::string& stem, std::set<std::string>& taken) {
  std::string name = stem;
  for (int i = 1; taken.count(name); ++i) name = stem + std::to_string(i);
  taken.insert(name);
  return name;
}

TwoSatClause forcing_clause(const SoVarDecl& var, const std::vector<std::string>& pad) {
  SoLiteral lit{true, var.name, std::vector<std::string>(pad.begin(), pad.begin() + var.arity)};
  return TwoSatClause{{lit, fo::bottom(), fo::bottom()}};
}

}  // namespace

SumNormalForm normalize_qso(const Qso& sentence, const Vocabulary& vocabulary) {
  auto check = check_sentence(sentence);
  if (!check.ok()) {
    std::string names;
    for (const auto& v : check.free_fo) names += (names.empty() ? "" : ", ") + v;
    for (const auto& v : check.free_so) names += (names.empty() ? "" : ", ") + v;
    throw Error("logic.free_variable", "formula is not a sentence; free variables: " + names);
  }
  check_binding_discipline(sentence);

  std::vector<Leaf> leaves;
  {
    std::vector<SoVarDecl> so;
    std::vector<std::string> fo;
    collect_leaves(sentence, so, fo, leaves);
  }

  std::set<std::string> taken;
  collect_names(sentence, taken);
  for (const auto& s : vocabulary.symbols()) taken.insert(s.name);

  std::uint64_t total_copies = 0;
  for (const auto& leaf : leaves) {
    total_copies += leaf.copies;
    if (total_copies > kMaxExpandedConstant)
      throw Error("logic.fragment", "constants sum to more than " + std::to_string(kMaxExpandedConstant) +
                                        " unit terms; rewrite the formula with explicit sums");
  }

  // Union of second-order variables in order of first appearance; the unit
  // variable for constants is placed where the first nonzero constant occurs.
  // A name bound at a second arity in another term gets a fresh name there.
  std::vector<SoVarDecl> shared;
  std::map<std::pair<std::string, unsigned>, std::string> shared_name;
  std::optional<SoVarDecl> unit;
  for (auto& leaf : leaves) {
    for (auto& d : leaf.so_prefix) {
      auto key = std::make_pair(d.name, d.arity);
      auto it = shared_name.find(key);
      if (it == shared_name.end()) {
        const bool clash = std::any_of(shared.begin(), shared.end(), [&](const SoVarDecl& s) { return s.name == d.name; });
        it = shared_name.emplace(key, clash ? fresh(d.name, taken) : d.name).first;
        shared.push_back({it->second, d.arity});
      }
      if (it->second != d.name) leaf.rename[d.name] = it->second;
      d.name = it->second;
    }
    if (!leaf.base && leaf.copies > 0 && !unit) {
      unit = SoVarDecl{fresh("K", taken), 1};
      shared.push_back(*unit);
    }
  }

  SumNormalForm out;
  for (const auto& leaf : leaves) {
    if (!leaf.base && leaf.copies == 0) continue;

    NormalTerm term;
    term.so_vars = shared;
    term.fo_sum_vars = leaf.fo_prefix;

    std::vector<SoVarDecl> forced;
    for (const auto& d : shared) {
      bool bound = std::any_of(leaf.so_prefix.begin(), leaf.so_prefix.end(),
                               [&](const SoVarDecl& p) { return p.name == d.name; });
      if (!bound) forced.push_back(d);
    }
    unsigned pad_arity = 0;
    for (const auto& d : forced) pad_arity = std::max(pad_arity, d.arity);
    std::vector<std::string> pad;
    for (unsigned i = 0; i < pad_arity; ++i) pad.push_back(fresh("u", taken));

    if (leaf.base) {
      term.exists_vars = leaf.base->exists_vars;
      term.forall_vars = leaf.base->forall_vars;
      term.clauses = leaf.base->clauses;
      for (auto& c : term.clauses)
        for (auto& part : c.parts)
          if (auto* lit = std::get_if<SoLiteral>(&part); lit && leaf.rename.count(lit->var))
            lit->var = leaf.rename.at(lit->var);
    }
    term.forall_vars.insert(term.forall_vars.end(), pad.begin(), pad.end());
    for (const auto& d : forced) term.clauses.push_back(forcing_clause(d, pad));

    if (leaf.base) {
      out.terms.push_back(std::move(term));
    } else {
      for (std::uint64_t i = 0; i < leaf.copies; ++i) out.terms.push_back(term);
    }
  }
  return out;
}

}  // namespace qsocount
