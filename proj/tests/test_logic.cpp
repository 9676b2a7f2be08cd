#include <doctest.h>

#include "oracles.hpp"
#include "qsocount/error.hpp"
#include "qsocount/eval.hpp"
#include "qsocount/generators.hpp"
#include "qsocount/normalize.hpp"
#include "qsocount/syntax.hpp"

using namespace qsocount;

namespace {

const Vocabulary kVocab({{"P", 1}, {"E", 2}});

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

std::size_t so_literal_count(const TwoSatClause& c) {
  std::size_t k = 0;
  for (const auto& p : c.parts) k += std::holds_alternative<SoLiteral>(p);
  return k;
}

// Every clause in every Base of a formula.
void each_clause(const Qso& f, const std::function<void(const TwoSatClause&)>& visit) {
  using namespace qso_node;
  std::visit(Overloaded{
                 [&](const Base& b) {
                   for (const auto& c : b.formula.clauses) visit(c);
                 },
                 [&](const Plus& p) {
                   each_clause(p.lhs, visit);
                   each_clause(p.rhs, visit);
                 },
                 [&](const SumFo& s) { each_clause(s.body, visit); },
                 [&](const SumSo& s) { each_clause(s.body, visit); },
                 [](const Const&) {},
             },
             f->node);
}

}  // namespace

TEST_CASE("qso grammar instance") {
  auto f = parse_qso("sum T:1 . exists . forall u . [ T(u) | bot | bot ]", kVocab);
  const auto* sum = std::get_if<qso_node::SumSo>(&f->node);
  REQUIRE(sum);
  CHECK(sum->var == "T");
  CHECK(sum->arity == 1);
  const auto* base = std::get_if<qso_node::Base>(&sum->body->node);
  REQUIRE(base);
  CHECK(base->formula.clauses.size() == 1);
  CHECK(base->formula.forall_vars == std::vector<std::string>{"u"});
}

TEST_CASE("clause shape violations") {
  CHECK(code_of([] { parse_qso("sum T:1 . sum S:1 . sum R:1 . exists . forall u . [ T(u) | S(u) | R(u) ]", kVocab); }) ==
        "logic.shape");
  CHECK(code_of([] { parse_qso("exists . forall u . [ {P(u)} | bot ]", kVocab); }) == "logic.shape");
  // bare relation atoms read as second-order literals
  CHECK(code_of([] { parse_qso("exists . forall u . [ P(u) | bot | bot ]", kVocab); }) == "logic.symbol_clash");
  CHECK(code_of([] { parse_qso("exists . forall u . [ {P(u)} | bot | bot | top ]", kVocab); }) == "logic.shape");
}

TEST_CASE("sibling sums may reuse a name at another arity") {
  auto f = parse_qso("(sum X:1 . exists . forall . [ top | bot | bot ]) + (sum X:2 . exists . forall . [ top | bot | bot ])",
                     kVocab);
  Structure two(kVocab, 2, {});
  CHECK(qso_eval(two, f) == 4 + 16);
  CHECK(qso_eval(two, normalize_qso(f, kVocab).to_qso()) == 20);
}

TEST_CASE("pi2 grammar instance") {
  Vocabulary v({{"C", 2}});
  auto spec = parse_pi2("pivar T:1 . forall c . exists x . { C(c,x) } & T(x)", v);
  CHECK(spec.so_var == SoVarDecl{"T", 1});
  CHECK(spec.forall_vars == std::vector<std::string>{"c"});
  CHECK(spec.exists_vars == std::vector<std::string>{"x"});
  CHECK(print(spec) == "pivar T:1 . forall c . exists x . {C(c,x)} & T(x)");
  CHECK(code_of([&] { parse_pi2("pivar T:2 . forall c . exists x . { C(c,x) } & T(x)", v); }) != "");
  CHECK(code_of([&] { parse_pi2("pivar T:1 . forall c . exists x . { C(c,x) } & T(c)", v); }) != "");
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_fo("Q(x)", kVocab); }) == "logic.unknown_symbol");
  CHECK(code_of([] { parse_fo("E(x)", kVocab); }) == "logic.arity");
  CHECK(code_of([] { parse_fo("(P(x)", kVocab); }) == "logic.syntax");
  CHECK(code_of([] { parse_qso("sum P:1 . exists . forall u . [ P(u) | bot | bot ]", kVocab); }) ==
        "logic.symbol_clash");
  CHECK(code_of([] { parse_qso("sumfo x . sumfo x . 1", kVocab); }) == "logic.shadowing");
  CHECK(code_of([] { parse_qso("sum X:1 . sum X:2 . 1", kVocab); }) == "logic.shadowing");
  CHECK(code_of([] { parse_qso("sumfo x . exists . forall . [ {exists x . P(x)} | bot | bot ]", kVocab); }) ==
        "logic.shadowing");
  CHECK(code_of([] { parse_qso("exists . forall u . [ X(u) | X(u,u) | top ]", kVocab); }) == "logic.arity");
  CHECK(code_of([] { parse_qso("sum X:1 . exists . forall u . [ X(u,u) | bot | top ]", kVocab); }) == "logic.arity");
  CHECK(code_of([] { parse_qso("1 +", kVocab); }) == "logic.syntax");
  try {
    parse_qso("sumfo x .\n  exists . forall . [ {P(x) & } | bot | bot ]", kVocab);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("check_sentence") {
  CHECK(check_sentence(parse_qso("sumfo x . exists . forall . [ top | bot | bot ]", kVocab)).ok());
  auto open = check_sentence(parse_qso("exists . forall . [ {P(x)} | bot | bot ]", kVocab));
  CHECK_FALSE(open.ok());
  CHECK(open.free_fo == std::set<std::string>{"x"});
  CHECK(check_sentence(parse_qso("sum X:1 . sumfo x . exists y . forall z . [ X(x) | bot | bot ]", kVocab)).ok());
  auto so_open = check_sentence(parse_qso("sumfo x . exists . forall . [ X(x) | bot | bot ]", kVocab));
  CHECK(so_open.free_so == std::set<std::string>{"X"});
}

TEST_CASE("lowering") {
  auto f = parse_fo("forall x . (P(x) -> exists y . (E(x,y) & ~(x = y)))", kVocab);
  CHECK_FALSE(is_core(f));
  auto g = lower(f);
  CHECK(is_core(g));
  CHECK(lower(g) == g);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto s = gen::structure(rng, kVocab, 1, 3);
    int fresh = 0;
    auto phi = gen::fo_formula(rng, {"a", "b"}, fresh);
    for (Element a = 0; a < s.universe_size(); ++a)
      for (Element b = 0; b < s.universe_size(); ++b) {
        oracle::FoEnv env{{"a", a}, {"b", b}};
        auto env2 = env;
        CHECK(oracle::fo(s, phi, env) == oracle::fo(s, lower(phi), env2));
      }
  }
}

TEST_CASE("print then parse is the identity") {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    auto q = gen::qso_sentence(rng);
    auto text = print(q);
    auto back = parse_qso(text, kVocab);
    CHECK(back == q);
    CHECK(print(back) == text);

    auto spec = gen::pi2_spec(rng);
    CHECK(parse_pi2(print(spec), kVocab) == spec);

    int fresh = 0;
    auto phi = gen::fo_formula(rng, {"a", "b"}, fresh);
    CHECK(parse_fo(print(phi), kVocab) == phi);
  }
  auto rh = parse_rh("rhpi1 X:1 Y:2 . count x . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ; {P(x)} | Y(x,y1) ]",
                     kVocab);
  CHECK(parse_rh(print(rh), kVocab) == rh);
  auto sugar = parse_fo("forall x . (P(x) -> (P(x) & ~E(x,x)))", kVocab);
  CHECK(parse_fo(print(sugar), kVocab) == sugar);
}

TEST_CASE("accepted clauses respect the two-literal shape") {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    auto q = parse_qso(print(gen::qso_sentence(rng)), kVocab);
    each_clause(q, [](const TwoSatClause& c) {
      CHECK(so_literal_count(c) <= 2);
      CHECK(so_literal_count(c) < 3);
    });
  }
}

TEST_CASE("normalize: constants become unit terms") {
  auto nf = normalize_qso(qso::constant(3));
  REQUIRE(nf.terms.size() == 3);
  for (const auto& t : nf.terms) {
    CHECK(t == nf.terms[0]);
    REQUIRE(t.so_vars.size() == 1);
    CHECK(t.so_vars[0].arity == 1);
    CHECK(t.clauses.size() == 1);
  }
  Structure s(Vocabulary{}, 3, {});
  CHECK(oracle::qso(s, nf.to_qso()) == 3);
  CHECK(normalize_qso(qso::constant(0)).terms.empty());
  CHECK(code_of([] { normalize_qso(qso::constant(kMaxExpandedConstant + 1)); }) == "logic.fragment");
}

TEST_CASE("normalize: padding to a shared variable list") {
  auto f = parse_qso(
      "(sum X:1 . exists . forall u . [ X(u) | {P(u)} | bot ]) + (sum Y:1 . exists . forall v . [ ~Y(v) | top | bot ])",
      kVocab);
  auto nf = normalize_qso(f, kVocab);
  REQUIRE(nf.terms.size() == 2);
  std::vector<SoVarDecl> shared{{"X", 1}, {"Y", 1}};
  CHECK(nf.terms[0].so_vars == shared);
  CHECK(nf.terms[1].so_vars == shared);
  CHECK(nf.terms[0].clauses.size() == 2);
  CHECK(nf.terms[1].clauses.size() == 2);
  CHECK(nf.terms[0].forall_vars.size() == 2);
}

TEST_CASE("normalize: second-order sums hoisted above first-order sums") {
  auto f = parse_qso("sumfo x . sum X:1 . exists . forall y . [ X(x) | {E(x,y)} | bot ]", kVocab);
  auto nf = normalize_qso(f, kVocab);
  REQUIRE(nf.terms.size() == 1);
  CHECK(nf.terms[0].so_vars == std::vector<SoVarDecl>{{"X", 1}});
  CHECK(nf.terms[0].fo_sum_vars == std::vector<std::string>{"x"});
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto s = gen::structure(rng, kVocab, 1, 3);
    CHECK(oracle::qso(s, nf.to_qso()) == oracle::qso(s, f));
  }
}

TEST_CASE("normalize preserves values") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto f = gen::qso_sentence(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    auto nf = normalize_qso(f, kVocab);
    std::uint64_t exponent = 0;
    if (!nf.terms.empty())
      for (const auto& x : nf.terms[0].so_vars) exponent += *checked_power(s.universe_size(), x.arity);
    if (exponent > 12) continue;
    CHECK(oracle::qso(s, nf.to_qso()) == oracle::qso(s, f));
    for (const auto& t : nf.terms) CHECK(t.so_vars == nf.terms[0].so_vars);
  }
  CHECK(code_of([] { normalize_qso(parse_qso("exists . forall . [ {P(x)} | bot | bot ]", kVocab)); }) ==
        "logic.free_variable");
}

TEST_CASE("restricted Horn embedding") {
  Vocabulary v({{"E", 2}});
  auto rh = parse_rh("rhpi1 X:1 . count . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]", v);
  auto q = rh_to_qso(rh);
  CHECK(print(q) == "sum X:1 . exists . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]");
  Structure chain(v, 2, {{"E", {{0, 1}}}});
  CHECK(oracle::qso(chain, q) == 3);
  CHECK(check_sentence(q).ok());

  auto plain = rh_to_qso(parse_rh("rhpi1 X:1 . count x . forall y . [ {E(x,y)} | {~E(y,x)} ]", v));
  CHECK(print(plain) == "sum X:1 . sumfo x . exists . forall y . [ {(E(x,y) | ~E(y,x))} | bot | bot ]");
  CHECK(code_of([&] { parse_rh("rhpi1 X:1 . count . forall y z . [ X(y) | X(z) ]", v); }) == "logic.shape");
  CHECK(code_of([&] { parse_rh("rhpi1 X:1 . count . forall y z . [ ~X(y) | ~X(z) ]", v); }) == "logic.shape");
}

TEST_CASE("rh_to_qso output is always a well-shaped sentence") {
  Rng rng(24);
  Vocabulary v({{"P", 1}, {"E", 2}});
  for (int i = 0; i < 200; ++i) {
    RhPi1Formula rh;
    rh.so_vars = {{"X", 1}, {"Y", 2}};
    rh.fo_count_vars = rng.below(2) ? std::vector<std::string>{"x"} : std::vector<std::string>{};
    rh.forall_vars = {"y", "z"};
    std::vector<std::string> scope = rh.forall_vars;
    scope.insert(scope.end(), rh.fo_count_vars.begin(), rh.fo_count_vars.end());
    const auto clauses = 1 + rng.below(3);
    for (std::uint64_t c = 0; c < clauses; ++c) {
      RhClause clause;
      auto pick = [&] { return scope[rng.below(scope.size())]; };
      const auto fo_lits = rng.below(3);
      for (std::uint64_t k = 0; k < fo_lits; ++k) clause.fo_literals.push_back(fo::atom("E", {pick(), pick()}));
      if (rng.below(2)) clause.pos_so.push_back({true, "X", {pick()}});
      if (rng.below(2)) clause.neg_so.push_back({false, "Y", {pick(), pick()}});
      if (clause.fo_literals.empty() && clause.pos_so.empty() && clause.neg_so.empty())
        clause.fo_literals.push_back(fo::bottom());
      rh.clauses.push_back(clause);
    }
    auto q = rh_to_qso(rh);
    CHECK(check_sentence(q).ok());
    CHECK_NOTHROW(check_binding_discipline(q));
    each_clause(q, [](const TwoSatClause& c) { CHECK_NOTHROW(validate_clause(c)); });
    CHECK(parse_rh(print(rh), v) == rh);
  }
}
