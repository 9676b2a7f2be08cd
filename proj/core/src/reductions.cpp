#include "qsocount/reductions.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "qsocount/error.hpp"
#include "qsocount/syntax.hpp"

namespace qsocount {

std::uint32_t AtomTable::variable_of(std::size_t so_index, std::span<const Element> args) const {
  std::uint64_t offset = 0;
  for (std::size_t k = 0; k < so_index; ++k) offset += *checked_power(universe_size, so_vars[k].arity);
  return static_cast<std::uint32_t>(offset + tuple_rank(args, universe_size) + 1);
}

namespace {

void require_nonempty(const Structure& s) {
  if (s.universe_size() == 0) throw Error("reductions.empty_universe", "the universe must be nonempty");
}

std::uint64_t bounded_power(std::uint64_t n, std::uint64_t k, std::uint64_t limit, const std::string& what) {
  auto p = checked_power(n, k, limit);
  if (!p)
    throw Error("reductions.budget", what + " " + std::to_string(n) + "^" + std::to_string(k) + " exceeds budget " +
                                         std::to_string(limit));
  return *p;
}

// Odometer over universe^size in lexicographic order.
bool next_tuple(Tuple& t, std::size_t n) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < n) return true;
    t[i] = 0;
  }
  return false;
}

unsigned fo_depth(const Fo& f) {
  using namespace fo_node;
  return std::visit(Overloaded{
                        [](const Not& x) { return fo_depth(x.body); },
                        [](const Or& x) { return std::max(fo_depth(x.lhs), fo_depth(x.rhs)); },
                        [](const And& x) { return std::max(fo_depth(x.lhs), fo_depth(x.rhs)); },
                        [](const Implies& x) { return std::max(fo_depth(x.lhs), fo_depth(x.rhs)); },
                        [](const Exists& x) { return 1 + fo_depth(x.body); },
                        [](const Forall& x) { return 1 + fo_depth(x.body); },
                        [](const auto&) { return 0u; },
                    },
                    f->node);
}

// One clause of a term prepared for grounding.
struct GroundingClause {
  std::vector<std::unique_ptr<CompiledFo>> fo_parts;
  struct Lit {
    std::size_t so_index;
    bool positive;
    std::vector<std::size_t> positions;  // into the x ++ y ++ z environment
  };
  std::vector<Lit> literals;
};

}  // namespace

D2sReduction reduce_qso_to_d2s(const SumNormalForm& nf, const Structure& structure, const EvalBudget& budget) {
  require_nonempty(structure);
  const std::size_t n = structure.universe_size();
  const std::uint64_t limit = budget.max_fo_expansion;

  D2sReduction out;
  AtomTable& table = out.table;
  table.universe_size = n;
  if (!nf.terms.empty()) table.so_vars = nf.terms.front().so_vars;
  for (const auto& term : nf.terms)
    if (term.so_vars != table.so_vars)
      throw Error("reductions.shape", "terms of a normal form must share their second-order variables");

  std::uint64_t atom_count = 0;
  for (const auto& x : table.so_vars) {
    atom_count += bounded_power(n, x.arity, limit, "ground atoms");
    if (atom_count > limit) throw Error("reductions.budget", "ground atom count exceeds budget");
  }
  for (const auto& x : table.so_vars) {
    Tuple t(x.arity, 0);
    do table.atoms.push_back({x.name, t});
    while (next_tuple(t, n));
  }

  std::uint64_t group_count = 0;
  for (const auto& term : nf.terms) {
    group_count += bounded_power(n, term.fo_sum_vars.size(), limit, "first-order sum groups");
    if (group_count > limit) throw Error("reductions.budget", "group count exceeds budget");
  }
  const auto first_selector = static_cast<std::uint32_t>(table.atoms.size() + 1);

  // Ground clause sets per disjunct, before selectors are attached.
  struct Pending {
    std::uint32_t selector;
    TwoSatConjunct clauses;
    bool falsum = false;
  };
  std::vector<Pending> pending;
  std::vector<bool> atom_used(table.atoms.size() + 1, false);

  for (std::size_t i = 0; i < nf.terms.size(); ++i) {
    const auto& term = nf.terms[i];
    std::vector<std::string> env = term.fo_sum_vars;
    env.insert(env.end(), term.exists_vars.begin(), term.exists_vars.end());
    env.insert(env.end(), term.forall_vars.begin(), term.forall_vars.end());
    unsigned depth = 0;
    for (const auto& c : term.clauses)
      for (const auto& part : c.parts)
        if (const auto* fo = std::get_if<Fo>(&part)) depth = std::max(depth, fo_depth(*fo));
    auto work = bounded_power(n, env.size() + depth, limit, "grounding of term " + std::to_string(i + 1));
    if (work * std::max<std::size_t>(term.clauses.size(), 1) > limit)
      throw Error("reductions.budget", "grounding of term " + std::to_string(i + 1) + " exceeds budget");

    std::vector<GroundingClause> clauses;
    for (const auto& c : term.clauses) {
      GroundingClause gc;
      for (const auto& part : c.parts) {
        if (const auto* fo = std::get_if<Fo>(&part)) {
          gc.fo_parts.push_back(std::make_unique<CompiledFo>(structure, *fo, env));
          continue;
        }
        const auto& lit = std::get<SoLiteral>(part);
        auto so = std::find_if(table.so_vars.begin(), table.so_vars.end(),
                               [&](const SoVarDecl& d) { return d.name == lit.var; });
        if (so == table.so_vars.end())
          throw Error("reductions.shape", "second-order variable '" + lit.var + "' is not bound");
        GroundingClause::Lit gl{static_cast<std::size_t>(so - table.so_vars.begin()), lit.positive, {}};
        for (const auto& a : lit.args) {
          auto p = std::find(env.rbegin(), env.rend(), a);
          if (p == env.rend()) throw Error("reductions.shape", "first-order variable '" + a + "' is not bound");
          gl.positions.push_back(static_cast<std::size_t>(env.rend() - p - 1));
        }
        gc.literals.push_back(std::move(gl));
      }
      clauses.push_back(std::move(gc));
    }

    const std::size_t nx = term.fo_sum_vars.size(), ny = term.exists_vars.size(), nz = term.forall_vars.size();
    Tuple values(env.size(), 0);
    Tuple a(nx, 0);
    do {
      const auto selector = static_cast<std::uint32_t>(first_selector + table.selectors.size());
      table.selectors.push_back(selector);
      table.groups.emplace_back(i, a);
      std::copy(a.begin(), a.end(), values.begin());
      Tuple b(ny, 0);
      do {
        std::copy(b.begin(), b.end(), values.begin() + static_cast<std::ptrdiff_t>(nx));
        Pending disjunct{selector, {}, false};
        std::set<PropClause> seen;
        for (const auto& gc : clauses) {
          Tuple c(nz, 0);
          do {
            std::copy(c.begin(), c.end(), values.begin() + static_cast<std::ptrdiff_t>(nx + ny));
            bool satisfied = false;
            for (const auto& part : gc.fo_parts)
              if ((*part)(values)) {
                satisfied = true;
                break;
              }
            if (satisfied) continue;
            PropClause clause;
            for (const auto& lit : gc.literals) {
              Tuple args;
              for (auto p : lit.positions) args.push_back(values[p]);
              auto var = table.variable_of(lit.so_index, args);
              clause.push_back(lit.positive ? static_cast<Literal>(var) : -static_cast<Literal>(var));
            }
            if (clause.empty()) {
              disjunct.falsum = true;
              continue;
            }
            clause = canonical_clause(std::move(clause));
            if (seen.insert(clause).second) {
              for (Literal l : clause) atom_used[var_of(l)] = true;
              disjunct.clauses.push_back(std::move(clause));
            }
          } while (next_tuple(c, n));
        }
        pending.push_back(std::move(disjunct));
      } while (next_tuple(b, n));
    } while (next_tuple(a, n));
  }

  out.formula.num_vars = table.num_vars();
  TwoSatConjunct tautologies;
  for (std::uint32_t v = 1; v <= table.atoms.size(); ++v)
    if (!atom_used[v]) tautologies.push_back({-static_cast<Literal>(v), static_cast<Literal>(v)});
  for (auto& p : pending) {
    TwoSatConjunct conj = std::move(p.clauses);
    const auto s = static_cast<Literal>(p.selector);
    if (p.falsum) {
      conj.push_back({s});
      conj.push_back({-s});
    }
    conj.insert(conj.end(), tautologies.begin(), tautologies.end());
    if (!p.falsum) conj.push_back({s});
    for (auto other : table.selectors)
      if (other != p.selector) conj.push_back({-static_cast<Literal>(other)});
    out.formula.disjuncts.push_back(std::move(conj));
  }
  return out;
}

namespace {

// Removes every clause that strictly contains another one; the model set is
// unchanged. Input clauses are sorted and pairwise distinct; order is kept.
std::vector<std::vector<std::uint64_t>> drop_subsumed(std::vector<std::vector<std::uint64_t>> clauses) {
  std::map<std::uint64_t, std::vector<std::size_t>> occurs;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (auto atom : clauses[i]) occurs[atom].push_back(i);
  std::vector<bool> gone(clauses.size(), false);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& d = clauses[i];
    const auto* rarest = &occurs[d.front()];
    for (auto atom : d)
      if (occurs[atom].size() < rarest->size()) rarest = &occurs[atom];
    for (auto j : *rarest) {
      const auto& c = clauses[j];
      if (!gone[j] && c.size() > d.size() && std::includes(c.begin(), c.end(), d.begin(), d.end())) gone[j] = true;
    }
  }
  std::vector<std::vector<std::uint64_t>> kept;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (!gone[i]) kept.push_back(std::move(clauses[i]));
  return kept;
}

}  // namespace

ProductResult reduce_pi2_to_monotone(const Pi2Spec& spec, const Structure& structure, const EvalBudget& budget) {
  validate_pi2(spec);
  require_nonempty(structure);
  const std::size_t n = structure.universe_size();
  const std::uint64_t limit = budget.max_fo_expansion;
  bounded_power(n, spec.so_var.arity, limit, "ground atoms");
  bounded_power(n, spec.forall_vars.size() + spec.exists_vars.size() + fo_depth(spec.fo_part), limit, "grounding");

  std::vector<std::string> env = spec.forall_vars;
  env.insert(env.end(), spec.exists_vars.begin(), spec.exists_vars.end());
  CompiledFo phi(structure, spec.fo_part, env);

  const std::size_t ny = spec.forall_vars.size(), nz = spec.exists_vars.size();
  std::vector<std::vector<std::uint64_t>> clauses;  // atom ranks
  std::set<std::vector<std::uint64_t>> seen;
  ProductResult result;
  Tuple values(env.size(), 0);
  Tuple a(ny, 0);
  do {
    std::copy(a.begin(), a.end(), values.begin());
    std::vector<std::uint64_t> clause;
    Tuple b(nz, 0);
    do {
      std::copy(b.begin(), b.end(), values.begin() + static_cast<std::ptrdiff_t>(ny));
      if (phi(values)) clause.push_back(tuple_rank(b, n));
    } while (next_tuple(b, n));
    if (clause.empty()) {
      result.unsatisfiable = true;
      return result;
    }
    if (seen.insert(clause).second) clauses.push_back(std::move(clause));
  } while (next_tuple(a, n));

  clauses = drop_subsumed(std::move(clauses));

  std::set<std::uint64_t> atoms;
  for (const auto& c : clauses) atoms.insert(c.begin(), c.end());
  std::map<std::uint64_t, std::uint32_t> var_of_rank;
  for (auto rank : atoms) {
    var_of_rank[rank] = static_cast<std::uint32_t>(result.atoms.size() + 1);
    result.atoms.push_back(tuple_unrank(rank, spec.so_var.arity, n));
  }
  result.cnf.num_vars = static_cast<std::uint32_t>(atoms.size());
  for (const auto& c : clauses) {
    std::vector<std::uint32_t> vars;
    for (auto rank : c) vars.push_back(var_of_rank[rank]);
    result.cnf.clauses.push_back(std::move(vars));
  }
  result.exponent = *checked_power(n, spec.so_var.arity) - atoms.size();
  return result;
}

QsoEncoding encode_d2s_as_qso(const Disj2SatFormula& formula) {
  if (formula.num_vars == 0) throw Error("reductions.degenerate", "the formula needs at least one variable");
  if (!formula.fixed.empty()) throw Error("reductions.degenerate", "cannot encode a restricted formula");
  validate(formula);
  std::size_t clause_count = 0;
  for (const auto& conj : formula.disjuncts) clause_count += conj.size();
  const Element vars = formula.num_vars;
  const auto first_clause = vars;
  const auto first_disjunct = static_cast<Element>(vars + clause_count);
  const std::size_t universe = first_disjunct + formula.disjuncts.size();

  Vocabulary vocab({{"C1", 3}, {"C2", 3}, {"C3", 3}, {"C4", 3}, {"D", 2}, {"Var", 1}, {"Disj", 1}});
  std::map<std::string, std::vector<Tuple>> rel;
  for (Element v = 0; v < vars; ++v) rel["Var"].push_back({v});
  Element c = first_clause;
  for (std::size_t d = 0; d < formula.disjuncts.size(); ++d) {
    const auto de = static_cast<Element>(first_disjunct + d);
    rel["Disj"].push_back({de});
    for (const auto& clause : formula.disjuncts[d]) {
      rel["D"].push_back({de, c});
      if (clause.empty()) {
        // x1 | x1 together with ~x1 | ~x1
        rel["C1"].push_back({c, 0, 0});
        rel["C4"].push_back({c, 0, 0});
      } else {
        Literal l1 = clause[0];
        Literal l2 = clause.size() > 1 ? clause[1] : clause[0];
        const char* which = l1 > 0 ? (l2 > 0 ? "C1" : "C3") : (l2 > 0 ? "C2" : "C4");
        rel[which].push_back({c, var_of(l1) - 1, var_of(l2) - 1});
      }
      ++c;
    }
  }
  Structure structure(vocab, universe, rel);
  const std::string text =
      "sum T:1 . exists d . forall c x y . [ {Disj(d)} | bot | bot ; {Var(x)} | ~T(x) | bot ; "
      "{(~D(d,c) | ~C1(c,x,y))} | T(x) | T(y) ; {(~D(d,c) | ~C2(c,x,y))} | ~T(x) | T(y) ; "
      "{(~D(d,c) | ~C3(c,x,y))} | T(x) | ~T(y) ; {(~D(d,c) | ~C4(c,x,y))} | ~T(x) | ~T(y) ]";
  return {std::move(structure), parse_qso(text, vocab)};
}

Pi2Encoding encode_monotone_as_pi2(const MonotoneCnf& formula) {
  validate(formula);
  if (formula.clauses.empty())
    throw Error("reductions.degenerate", "the encoding needs at least one clause; with none its correction is undefined");
  const auto m = static_cast<Element>(formula.clauses.size());
  Vocabulary vocab({{"C", 2}, {"IsClause", 1}});
  std::map<std::string, std::vector<Tuple>> rel;
  for (Element c = 0; c < m; ++c) {
    rel["IsClause"].push_back({c});
    for (auto v : formula.clauses[c]) rel["C"].push_back({c, m + v - 1});
  }
  Structure structure(vocab, m + formula.num_vars, rel);
  auto spec = parse_pi2("pivar T:1 . forall c . exists x . {(~IsClause(c) | C(c,x))} & T(x)", vocab);
  return {std::move(structure), std::move(spec), m};
}

Graph parse_graph(std::string_view text) {
  Graph g;
  bool header = false;
  std::size_t declared = 0;
  int number = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++number;
    std::istringstream words(line);
    std::string kind;
    if (!(words >> kind) || kind[0] == 'c') continue;
    if (kind == "p") {
      std::string format;
      long long nv = -1, ne = -1;
      if (header || !(words >> format >> nv >> ne) || format != "edge" || nv < 0 || ne < 0)
        throw ParseError("reductions.format", "expected a single 'p edge n m' header", number);
      g.num_vertices = static_cast<std::uint32_t>(nv);
      declared = static_cast<std::size_t>(ne);
      header = true;
    } else if (kind == "e") {
      long long u = 0, v = 0;
      if (!header) throw ParseError("reductions.format", "edge before the 'p edge' header", number);
      if (!(words >> u >> v)) throw ParseError("reductions.format", "expected 'e u v'", number);
      if (u < 1 || v < 1 || u > g.num_vertices || v > g.num_vertices)
        throw ParseError("reductions.format", "vertex outside 1.." + std::to_string(g.num_vertices), number);
      g.edges.emplace_back(static_cast<std::uint32_t>(u - 1), static_cast<std::uint32_t>(v - 1));
    } else {
      throw ParseError("reductions.format", "unexpected line '" + line + "'", number);
    }
    std::string extra;
    if (words >> extra) throw ParseError("reductions.format", "trailing token '" + extra + "'", number);
  }
  if (!header) throw ParseError("reductions.format", "missing 'p edge n m' header", 1);
  if (g.edges.size() != declared)
    throw ParseError("reductions.format",
                     "header declares " + std::to_string(declared) + " edges, found " + std::to_string(g.edges.size()),
                     number);
  return g;
}

std::string serialize_graph(const Graph& graph) {
  std::string out = "p edge " + std::to_string(graph.num_vertices) + " " + std::to_string(graph.edges.size()) + "\n";
  for (auto [u, v] : graph.edges) out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  return out;
}

Pi2Encoding encode_vc(const Graph& graph) {
  if (graph.edges.empty())
    throw Error("reductions.degenerate", "the encoding needs at least one edge; with none its correction is undefined");
  const Element nv = graph.num_vertices;
  Vocabulary vocab({{"E", 2}, {"End", 2}, {"IsEdge", 1}});
  std::map<std::string, std::vector<Tuple>> rel;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    auto [u, v] = graph.edges[i];
    if (u >= nv || v >= nv) throw Error("reductions.range", "edge endpoint outside the vertex set");
    const auto e = static_cast<Element>(nv + i);
    rel["E"].push_back({u, v});
    rel["IsEdge"].push_back({e});
    rel["End"].push_back({u, e});
    rel["End"].push_back({v, e});
  }
  Structure structure(vocab, nv + graph.edges.size(), rel);
  auto spec = parse_pi2("pivar VC:1 . forall x . exists y . {(~IsEdge(x) | End(y,x))} & VC(y)", vocab);
  return {std::move(structure), std::move(spec), graph.edges.size()};
}

}  // namespace qsocount
