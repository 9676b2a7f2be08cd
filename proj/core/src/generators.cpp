#include "qsocount/generators.hpp"

#include <algorithm>
#include <map>

namespace qsocount::gen {

namespace {

bool coin(Rng& rng, std::uint64_t num = 1, std::uint64_t den = 2) { return rng.below(den) < num; }

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng.below(hi - lo + 1); }

const std::string& pick(Rng& rng, const std::vector<std::string>& v) { return v[rng.below(v.size())]; }

Fo literal(Rng& rng, const std::vector<std::string>& vars) {
  Fo f;
  switch (vars.empty() ? 3 : rng.below(8)) {
    case 0:
    case 1:
    case 2:
      f = fo::atom("P", {pick(rng, vars)});
      break;
    case 3:
      f = coin(rng) ? fo::top() : fo::bottom();
      break;
    case 4:
      f = fo::eq(pick(rng, vars), pick(rng, vars));
      break;
    default:
      f = fo::atom("E", {pick(rng, vars), pick(rng, vars)});
      break;
  }
  return coin(rng) ? fo::negate(f) : f;
}

std::vector<std::string> fresh_names(const std::string& stem, std::size_t count, int& fresh) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(stem + std::to_string(fresh++));
  return out;
}

}  // namespace

Vocabulary default_vocabulary() { return Vocabulary({{"P", 1}, {"E", 2}}); }

Structure structure(Rng& rng, const Vocabulary& vocabulary, std::size_t min_size, std::size_t max_size) {
  const auto n = static_cast<std::size_t>(uniform(rng, min_size, max_size));
  std::map<std::string, std::vector<Tuple>> relations;
  for (const auto& sym : vocabulary.symbols()) {
    auto& tuples = relations[sym.name];
    const auto total = *checked_power(n, sym.arity);
    for (std::uint64_t r = 0; r < total; ++r)
      if (coin(rng)) tuples.push_back(tuple_unrank(r, sym.arity, n));
  }
  return Structure(vocabulary, n, relations);
}

Fo fo_formula(Rng& rng, const std::vector<std::string>& vars, int& fresh) {
  auto part = [&]() {
    if (!coin(rng, 1, 8)) return literal(rng, vars);
    auto w = "w" + std::to_string(fresh++);
    auto inner = vars;
    inner.push_back(w);
    Fo body = literal(rng, inner);
    if (coin(rng)) body = fo::conj(body, literal(rng, inner));
    return fo::exists(w, body);
  };
  Fo f = part();
  if (coin(rng)) f = fo::disj(f, part());
  return f;
}

Qso qso_sentence(Rng& rng, const QsoShape& shape) {
  int fresh = 0;
  std::vector<SoVarDecl> pool;
  const auto pool_size = uniform(rng, 0, shape.max_so_vars);
  for (std::uint64_t i = 0; i < pool_size; ++i)
    pool.push_back({std::string(1, static_cast<char>('X' + i)), static_cast<unsigned>(uniform(rng, 1, 2))});

  auto term = [&]() -> Qso {
    std::vector<SoVarDecl> so;
    for (const auto& d : pool)
      if (coin(rng)) so.push_back(d);
    auto sums = fresh_names("s", rng.below(shape.max_fo_sums + 1), fresh);
    auto ex = fresh_names("e", rng.below(shape.max_exists + 1), fresh);
    auto fa = fresh_names("a", rng.below(shape.max_forall + 1), fresh);
    std::vector<std::string> scope = sums;
    scope.insert(scope.end(), ex.begin(), ex.end());
    scope.insert(scope.end(), fa.begin(), fa.end());

    Sigma2TwoSatFormula base{ex, fa, {}};
    const auto clauses = uniform(rng, 1, shape.max_clauses);
    for (std::uint64_t c = 0; c < clauses; ++c) {
      std::vector<ClauseEntry> entries;
      const auto so_lits = (so.empty() || scope.empty()) ? 0 : rng.below(3);
      for (std::uint64_t k = 0; k < so_lits; ++k) {
        const auto& d = so[rng.below(so.size())];
        SoLiteral lit{coin(rng), d.name, {}};
        for (unsigned a = 0; a < d.arity; ++a) lit.args.push_back(pick(rng, scope));
        entries.emplace_back(lit);
      }
      const auto fo_parts = uniform(rng, 1, 3 - so_lits);
      for (std::uint64_t k = 0; k < fo_parts; ++k) entries.emplace_back(fo_formula(rng, scope, fresh));
      std::shuffle(entries.begin(), entries.end(), std::mt19937_64(rng.next()));
      TwoSatClause clause{{fo::bottom(), fo::bottom(), fo::bottom()}};
      for (std::size_t k = 0; k < entries.size(); ++k) clause.parts[k] = entries[k];
      base.clauses.push_back(clause);
    }
    Qso body = qso::base(base);
    // Random interleaving of the binders, innermost first.
    std::vector<int> order;
    for (std::size_t i = 0; i < so.size(); ++i) order.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < sums.size(); ++i) order.push_back(-1 - static_cast<int>(i));
    std::shuffle(order.begin(), order.end(), std::mt19937_64(rng.next()));
    for (int o : order)
      body = o >= 0 ? qso::sum_so(so[o].name, so[o].arity, body) : qso::sum_fo(sums[-1 - o], body);
    return body;
  };

  Qso f = term();
  const auto terms = uniform(rng, 1, shape.max_terms);
  for (std::uint64_t t = 1; t < terms; ++t) f = qso::plus(f, term());
  if (coin(rng, 1, 4)) f = qso::plus(f, qso::constant(uniform(rng, 0, shape.max_constant)));
  return f;
}

Pi2Spec pi2_spec(Rng& rng) {
  int fresh = 0;
  Pi2Spec spec;
  spec.so_var = {"X", static_cast<unsigned>(uniform(rng, 1, 2))};
  spec.forall_vars = fresh_names("y", rng.below(3), fresh);
  spec.exists_vars = fresh_names("z", spec.so_var.arity, fresh);
  std::vector<std::string> scope = spec.forall_vars;
  scope.insert(scope.end(), spec.exists_vars.begin(), spec.exists_vars.end());
  spec.fo_part = coin(rng, 1, 8) ? fo::top() : fo_formula(rng, scope, fresh);
  return spec;
}

namespace {

PropClause random_clause(Rng& rng, std::uint32_t num_vars) {
  const auto roll = rng.below(32);
  const std::size_t length = roll == 0 ? 0 : (roll < 8 ? 1 : 2);
  PropClause clause;
  for (std::size_t i = 0; i < length; ++i) {
    auto v = static_cast<Literal>(uniform(rng, 1, num_vars));
    clause.push_back(coin(rng) ? v : -v);
  }
  return canonical_clause(std::move(clause));
}

}  // namespace

TwoSatConjunct two_sat_conjunct(Rng& rng, std::uint32_t num_vars) {
  TwoSatConjunct conj;
  const auto count = rng.below(2 * num_vars + 1);
  for (std::uint64_t i = 0; i < count; ++i) conj.push_back(random_clause(rng, num_vars));
  return conj;
}

Disj2SatFormula d2s(Rng& rng, std::uint32_t max_vars, std::uint32_t max_disjuncts, std::uint32_t max_clauses) {
  Disj2SatFormula f;
  f.num_vars = static_cast<std::uint32_t>(uniform(rng, 1, max_vars));
  const auto k = rng.below(max_disjuncts + 1);
  for (std::uint64_t d = 0; d < k; ++d) {
    TwoSatConjunct conj;
    const auto m = rng.below(std::min(f.num_vars + 2, max_clauses) + 1);
    for (std::uint64_t i = 0; i < m; ++i) conj.push_back(random_clause(rng, f.num_vars));
    f.disjuncts.push_back(std::move(conj));
  }
  return f;
}

MonotoneCnf monotone_cnf(Rng& rng, std::uint32_t max_vars) {
  MonotoneCnf f;
  f.num_vars = static_cast<std::uint32_t>(uniform(rng, 1, max_vars));
  const auto m = uniform(rng, 1, 5);
  for (std::uint64_t c = 0; c < m; ++c) {
    const auto len = uniform(rng, 1, std::min<std::uint32_t>(3, f.num_vars));
    std::vector<std::uint32_t> clause;
    while (clause.size() < len) {
      auto v = static_cast<std::uint32_t>(uniform(rng, 1, f.num_vars));
      if (std::find(clause.begin(), clause.end(), v) == clause.end()) clause.push_back(v);
    }
    std::sort(clause.begin(), clause.end());
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

Graph graph(Rng& rng, std::uint32_t max_vertices) {
  while (true) {
    Graph g;
    g.num_vertices = static_cast<std::uint32_t>(uniform(rng, 2, max_vertices));
    for (std::uint32_t u = 0; u < g.num_vertices; ++u)
      for (std::uint32_t v = u + 1; v < g.num_vertices; ++v)
        if (coin(rng)) g.edges.emplace_back(u, v);
    if (!g.edges.empty()) return g;
  }
}

CountingSampler threshold_sampler(std::uint64_t domain_size, std::uint64_t accepted, bool promised_mr) {
  return {domain_size, [accepted](std::uint64_t i) { return i < accepted; }, promised_mr};
}

}  // namespace qsocount::gen
