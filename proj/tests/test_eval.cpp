#include <doctest.h>

#include "oracles.hpp"
#include "qsocount/error.hpp"
#include "qsocount/eval.hpp"
#include "qsocount/generators.hpp"
#include "qsocount/reductions.hpp"
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

Structure sized(std::size_t n) { return Structure(kVocab, n, {}); }

std::uint64_t so_exponent(const Qso& f, std::size_t n) {
  using namespace qso_node;
  return std::visit(Overloaded{
                        [&](const SumSo& s) { return *checked_power(n, s.arity) + so_exponent(s.body, n); },
                        [&](const SumFo& s) { return so_exponent(s.body, n); },
                        [&](const Plus& p) { return std::max(so_exponent(p.lhs, n), so_exponent(p.rhs, n)); },
                        [](const auto&) { return std::uint64_t{0}; },
                    },
                    f->node);
}

}  // namespace

TEST_CASE("first-order truth") {
  Vocabulary v({{"R", 2}});
  Structure a(v, 2, {{"R", {{0, 1}}}});
  CHECK(fo_eval(a, fo::top(), {}));
  CHECK_FALSE(fo_eval(a, fo::bottom(), {}));
  auto phi = parse_fo("exists y . R(x,y)", v);
  CHECK(fo_eval(a, phi, {{"x", 0}}));
  CHECK_FALSE(fo_eval(a, phi, {{"x", 1}}));
  CHECK(code_of([&] { fo_eval(a, phi, {}); }) == "eval.unbound");
  CHECK(code_of([&] { fo_eval(a, fo::atom("Q", {"x"}), {{"x", 0}}); }) == "eval.unknown_relation");
  CHECK(code_of([&] { fo_eval(Structure(v, 0, {}), fo::top(), {}); }) == "eval.empty_universe");
}

TEST_CASE("double negation and agreement with the naive evaluator") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    auto s = gen::structure(rng, kVocab, 1, 4);
    int fresh = 0;
    auto phi = gen::fo_formula(rng, {"a", "b"}, fresh);
    if (rng.below(2)) phi = fo::forall("c", fo::implies(fo::atom("P", {"c"}), phi));
    FoAssignment v{{"a", static_cast<Element>(rng.below(s.universe_size()))},
                   {"b", static_cast<Element>(rng.below(s.universe_size()))}};
    oracle::FoEnv env(v.begin(), v.end());
    const bool truth = fo_eval(s, phi, v);
    CHECK(truth == oracle::fo(s, phi, env));
    CHECK(fo_eval(s, fo::negate(fo::negate(phi)), v) == truth);
  }
}

TEST_CASE("table semantics on small examples") {
  CHECK(qso_eval(sized(3), parse_qso("3 + 4", kVocab)) == 7);
  CHECK(qso_eval(sized(5), parse_qso("sumfo x . exists . forall . [ top | bot | bot ]", kVocab)) == 5);
  CHECK(qso_eval(sized(2), parse_qso("sum X:2 . exists . forall . [ top | bot | bot ]", kVocab)) == 16);
  for (std::size_t n = 1; n <= 4; ++n)
    CHECK(qso_eval(sized(n), parse_qso("sum T:1 . exists . forall u . [ T(u) | bot | bot ]", kVocab)) == 1);
  CHECK(qso_eval(sized(2), parse_qso("0", kVocab)) == 0);
}

TEST_CASE("evaluation errors") {
  auto open = parse_qso("exists . forall . [ {P(x)} | bot | bot ]", kVocab);
  CHECK(code_of([&] { qso_eval(sized(2), open); }) == "eval.not_sentence");
  CHECK(code_of([&] { qso_eval(sized(0), parse_qso("1", kVocab)); }) == "eval.empty_universe");
  auto big = parse_qso("sum X:2 . sum Y:2 . exists . forall . [ top | bot | bot ]", kVocab);
  try {
    qso_eval(sized(4), big);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == "eval.budget");
    CHECK(std::string(e.what()).find("32") != std::string::npos);
  }
  EvalBudget b;
  b.max_so_exponent = 0;
  CHECK(code_of([&] { qso_eval(sized(2), parse_qso("1", kVocab), b); }) == "eval.budget");
  auto wide = parse_qso("sumfo a . sumfo b . sumfo c . sumfo d . exists . forall . [ top | bot | bot ]", kVocab);
  EvalBudget narrow;
  narrow.max_fo_expansion = 1000;
  CHECK(code_of([&] { qso_eval(sized(10), wide, narrow); }) == "eval.budget");
  CHECK(qso_eval(sized(10), wide) == 10000);
}

TEST_CASE("overflow is reported") {
  auto f = parse_qso("sum X:2 . sum Y:2 . sum Z:2 . sum W:2 . 18446744073709551615", kVocab);
  EvalBudget b;
  b.max_so_exponent = 16;
  CHECK(code_of([&] { qso_eval(sized(2), f, b); }) == "eval.overflow");
}

TEST_CASE("agreement with the naive evaluator on random sentences") {
  Rng rng(32);
  int compared = 0;
  while (compared < 300) {
    auto f = gen::qso_sentence(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    if (so_exponent(f, s.universe_size()) > 12) continue;
    CHECK(qso_eval(s, f) == oracle::qso(s, f));
    ++compared;
  }
}

TEST_CASE("linearity of plus") {
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    auto a = gen::qso_sentence(rng);
    auto b = gen::qso_sentence(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    CHECK(qso_eval(s, qso::plus(a, b)) == qso_eval(s, a) + qso_eval(s, b));
  }
}

TEST_CASE("sentence values do not depend on dummy assignments") {
  Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    auto f = gen::qso_sentence(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    const auto n = s.universe_size();
    FoAssignment fo1{{"dummy", static_cast<Element>(rng.below(n))}};
    FoAssignment fo2{{"dummy", static_cast<Element>(rng.below(n))}, {"other", 0}};
    SoAssignment so1{{"Q", {1, {{static_cast<Element>(rng.below(n))}}}}};
    SoAssignment so2{};
    CHECK(qso_eval_with(s, f, fo1, so1) == qso_eval_with(s, f, fo2, so2));
  }
}

TEST_CASE("free variables read the supplied assignments") {
  auto f = parse_qso("exists . forall . [ X(x) | bot | bot ]", kVocab);
  CHECK(qso_eval_with(sized(3), f, {{"x", 1}}, {{"X", {1, {{1}}}}}) == 1);
  CHECK(qso_eval_with(sized(3), f, {{"x", 2}}, {{"X", {1, {{1}}}}}) == 0);
}

TEST_CASE("vertex cover counts") {
  Graph k3{3, {{0, 1}, {0, 2}, {1, 2}}};
  auto enc = encode_vc(k3);
  CHECK(pi2_count(enc.structure, enc.spec) == 32);
  Graph p3{3, {{0, 1}, {1, 2}}};
  auto enc2 = encode_vc(p3);
  CHECK(enc2.structure.universe_size() == 5);
  CHECK(pi2_count(enc2.structure, enc2.spec) == 20);
}

TEST_CASE("pi2 with an unsatisfiable part") {
  Pi2Spec spec{{"X", 1}, {"y"}, {"z"}, fo::bottom()};
  CHECK(pi2_count(sized(3), spec) == 0);
  EvalBudget small;
  small.max_so_exponent = 8;
  Pi2Spec wide{{"X", 2}, {}, {"a", "b"}, fo::top()};
  CHECK(code_of([&] { pi2_count(sized(3), wide, small); }) == "eval.budget");
  CHECK(pi2_count(sized(2), wide) == 15);
}

TEST_CASE("pi2 satisfying sets are upward closed") {
  Rng rng(35);
  for (int i = 0; i < 60; ++i) {
    auto spec = gen::pi2_spec(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    const auto cells = *checked_power(s.universe_size(), spec.so_var.arity);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << cells); ++x) {
      if (!pi2_satisfies(s, spec, x)) continue;
      for (std::uint64_t bit = 0; bit < cells; ++bit) CHECK(pi2_satisfies(s, spec, x | (std::uint64_t{1} << bit)));
    }
  }
}

TEST_CASE("pi2 count equals the wrapped quantitative sentence") {
  Rng rng(36);
  for (int i = 0; i < 150; ++i) {
    auto spec = gen::pi2_spec(rng);
    spec.forall_vars.clear();
    spec.fo_part = fo::top();
    int fresh = 0;
    spec.fo_part = gen::fo_formula(rng, spec.exists_vars, fresh);
    auto s = gen::structure(rng, kVocab, 1, 3);
    // sum X . exists zs . forall . [ {phi} | bot | bot ; X(zs) | bot | bot ]
    Sigma2TwoSatFormula base{spec.exists_vars, {}, {}};
    base.clauses.push_back({{spec.fo_part, fo::bottom(), fo::bottom()}});
    base.clauses.push_back({{SoLiteral{true, spec.so_var.name, spec.exists_vars}, fo::bottom(), fo::bottom()}});
    auto wrapped = qso::sum_so(spec.so_var.name, spec.so_var.arity, qso::base(base));
    CHECK(pi2_count(s, spec) == qso_eval(s, wrapped));
    CHECK(pi2_count(s, spec) == oracle::pi2(s, spec));
  }
}

TEST_CASE("pi2 agrees with the naive oracle") {
  Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    auto spec = gen::pi2_spec(rng);
    auto s = gen::structure(rng, kVocab, 1, 3);
    CHECK(pi2_count(s, spec) == oracle::pi2(s, spec));
  }
}
