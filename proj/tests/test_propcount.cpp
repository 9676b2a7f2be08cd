#include <doctest.h>

#include "oracles.hpp"
#include "qsocount/counting.hpp"
#include "qsocount/error.hpp"
#include "qsocount/generators.hpp"

using namespace qsocount;

namespace {

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Disj2SatFormula single(std::uint32_t v, TwoSatConjunct conj) { return {v, {std::move(conj)}, {}}; }

}  // namespace

TEST_CASE("2SAT decisions") {
  CHECK_FALSE(sat2_satisfiable({{1}, {-1}}, 1));
  CHECK_FALSE(sat2_satisfiable({{1, 1}, {-1, -1}}, 1));
  CHECK(sat2_satisfiable({{1, 2}, {-1, 2}}, 2));
  CHECK(sat2_satisfiable({}, 3));
  CHECK_FALSE(sat2_satisfiable({{}}, 3));
  CHECK_FALSE(sat2_satisfiable({{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}, 2));
  CHECK(sat2_satisfiable({{-1, 2}, {-2, 3}, {-3, 1}}, 3));
}

TEST_CASE("2SAT agrees with enumeration") {
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const auto v = static_cast<std::uint32_t>(1 + rng.below(12));
    auto conj = gen::two_sat_conjunct(rng, v);
    CHECK(sat2_satisfiable(conj, v) == oracle::satisfiable(conj, v));
  }
}

TEST_CASE("disjunction decisions") {
  CHECK_FALSE(d2s_satisfiable({3, {}, {}}));
  CHECK(d2s_satisfiable({3, {{{1}, {-1}}, {}}, {}}));
  CHECK_FALSE(d2s_satisfiable({3, {{{1}, {-1}}, {{}}}, {}}));
}

TEST_CASE("brute force examples") {
  CHECK(count_bruteforce(single(2, {{1, 2}})).count == 3);
  CHECK(count_bruteforce(single(2, {})).count == 4);
  CHECK(count_bruteforce(Disj2SatFormula{2, {}, {}}).count == 0);
  CHECK(count_bruteforce(MonotoneCnf{3, {{1, 2}, {3}}}).count == 3);
  CHECK(count_bruteforce(MonotoneCnf{0, {}}).count == 1);
  CHECK(count_bruteforce(single(7, {{-7}})).count == 64);
  CHECK(count_bruteforce(single(0, {})).count == 1);
  CHECK(count_bruteforce(single(26, {{1, 26}})).count == (std::uint64_t{3} << 24));
  CHECK(code_of([] { count_bruteforce(single(27, {})); }) == "propcount.guard");
  CHECK(code_of([] { count_bruteforce(MonotoneCnf{27, {{1}}}); }) == "propcount.guard");
  CHECK(code_of([] { count_bruteforce(single(2, {{3}})); }) == "propcount.range");
}

TEST_CASE("brute force agrees with enumeration") {
  Rng rng(42);
  for (int i = 0; i < 400; ++i) {
    auto f = gen::d2s(rng, 10);
    CHECK(count_bruteforce(f).count == oracle::count(f));
    auto m = gen::monotone_cnf(rng, 10);
    CHECK(count_bruteforce(m).count == oracle::count(m));
  }
}

TEST_CASE("restriction") {
  auto taut = single(2, {});
  auto r = restrict(taut, 1, true);
  CHECK(r.disjuncts[0].empty());
  CHECK(r.free_count() == 1);
  CHECK(count_bruteforce(r).count == 2);

  auto clause = single(2, {{1, 2}});
  auto sat = restrict(clause, 1, true);
  CHECK(sat.disjuncts[0].empty());
  auto shrunk = restrict(clause, 1, false);
  CHECK(shrunk.disjuncts[0] == TwoSatConjunct{{2}});
  auto falsum = restrict(shrunk, 2, false);
  CHECK(falsum.disjuncts[0] == TwoSatConjunct{{}});
  CHECK(code_of([&] { restrict(sat, 1, false); }) == "propcount.range");
  CHECK(code_of([&] { restrict(clause, 3, false); }) == "propcount.range");
  CHECK(code_of([&] { restrict(clause, 0, false); }) == "propcount.range");
}

TEST_CASE("self-reduction identity") {
  Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    auto f = gen::d2s(rng, 10);
    const auto var = static_cast<std::uint32_t>(1 + rng.below(f.num_vars));
    CHECK(oracle::count(f) == oracle::count(restrict(f, var, false)) + oracle::count(restrict(f, var, true)));
    CHECK(count_bruteforce(f).count ==
          count_bruteforce(restrict(f, var, false)).count + count_bruteforce(restrict(f, var, true)).count);
  }
}

TEST_CASE("self-reduction counter") {
  auto r = count_selfreduce(single(2, {{1, 2}}));
  CHECK(r.count == 3);
  CHECK(r.method == "selfreduce");
  CHECK(r.nodes_explored >= 1);
  CHECK(r.nodes_explored <= 2 * 3 * 3);
  auto unsat = count_selfreduce(single(2, {{1}, {-1}}));
  CHECK(unsat.count == 0);
  CHECK(unsat.nodes_explored == 1);
  auto none = count_selfreduce(Disj2SatFormula{0, {{}}, {}});
  CHECK(none.count == 1);
  CHECK(none.nodes_explored == 1);
}

TEST_CASE("self-reduction matches brute force with output-sensitive work") {
  Rng rng(44);
  for (int i = 0; i < 500; ++i) {
    auto f = gen::d2s(rng, 14);
    auto brute = count_bruteforce(f);
    auto self = count_selfreduce(f);
    CHECK(self.count == brute.count);
    CHECK(d2s_satisfiable(f) == (brute.count > 0));
    if (brute.count == 0) {
      CHECK(self.nodes_explored == 1);
    } else {
      CHECK(self.nodes_explored <= 2 * (std::uint64_t{f.num_vars} + 1) * brute.count);
    }
  }
}

TEST_CASE("d2s format") {
  const char* text = "c example\np d2s 3 2\nd 2\n1 -2 0\n3 3 0\nd 1\n0\n";
  auto f = parse_d2s(text);
  CHECK(f.num_vars == 3);
  REQUIRE(f.disjuncts.size() == 2);
  CHECK(f.disjuncts[0] == TwoSatConjunct{{1, -2}, {3}});
  CHECK(f.disjuncts[1] == TwoSatConjunct{{}});
  CHECK(serialize_d2s(f) == "p d2s 3 2\nd 2\n1 -2 0\n3 3 0\nd 1\n0\n");
  CHECK(serialize_d2s(parse_d2s("p d2s 3 1\nd 1\n-2 1 0\n")) == "p d2s 3 1\nd 1\n1 -2 0\n");
  CHECK(serialize_d2s(parse_d2s("p d2s 3 1\nd 1\n2 -2 0\n")) == "p d2s 3 1\nd 1\n-2 2 0\n");
  CHECK(serialize_d2s(parse_d2s("p d2s 3 1\nd 1\n3 0\n")) == "p d2s 3 1\nd 1\n3 3 0\n");
  CHECK(detect_format(text) == PropFormat::D2s);

  CHECK(code_of([] { parse_d2s("p d2s 2 1\nd 1\n1 2 3 0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_d2s("p d2s 2 1\nd 1\n1 3 0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_d2s("p d2s 2 1\nd 2\n1 2 0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_d2s("p d2s 2 1\nd 1\n1 2\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_d2s("p d2s 2 0\nd 1\n"); }) == "propcount.format");
  try {
    parse_d2s("p d2s 2 1\nd 1\n1 x 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("d2s round trip on random formulas") {
  Rng rng(45);
  for (int i = 0; i < 300; ++i) {
    auto f = gen::d2s(rng, 12);
    auto text = serialize_d2s(f);
    CHECK(parse_d2s(text) == f);
    CHECK(serialize_d2s(parse_d2s(text)) == text);
  }
}

TEST_CASE("monotone DIMACS") {
  auto f = parse_monotone_dimacs("c comment\np cnf 3 2\n1 2 0\n3\n0\n");
  CHECK(f.num_vars == 3);
  CHECK(f.clauses == std::vector<std::vector<std::uint32_t>>{{1, 2}, {3}});
  CHECK(serialize_monotone_dimacs(f) == "p cnf 3 2\n1 2 0\n3 0\n");
  CHECK(detect_format("p cnf 3 2\n") == PropFormat::Cnf);
  CHECK(code_of([] { parse_monotone_dimacs("p cnf 3 1\n1 -2 0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_monotone_dimacs("p cnf 3 1\n0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_monotone_dimacs("p cnf 3 2\n1 0\n"); }) == "propcount.format");
  CHECK(code_of([] { parse_monotone_dimacs("p cnf 3 1\n4 0\n"); }) == "propcount.format");
  CHECK(code_of([] { detect_format("p sat 3\n"); }) == "propcount.format");
  Rng rng(46);
  for (int i = 0; i < 100; ++i) {
    auto m = gen::monotone_cnf(rng, 8);
    CHECK(parse_monotone_dimacs(serialize_monotone_dimacs(m)) == m);
  }
}
