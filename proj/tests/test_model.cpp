#include <doctest.h>

#include "qsocount/error.hpp"
#include "qsocount/model.hpp"
#include "qsocount/random.hpp"

using namespace qsocount;

namespace {

std::string error_code(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

int error_line(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

Structure random_structure(Rng& rng) {
  Vocabulary vocab;
  const auto symbols = rng.below(4);
  for (std::uint64_t i = 0; i < symbols; ++i)
    vocab.add({"R" + std::to_string(i), static_cast<unsigned>(1 + rng.below(3))});
  const std::size_t n = 1 + rng.below(4);
  std::map<std::string, std::vector<Tuple>> rel;
  for (const auto& s : vocab.symbols()) {
    auto& tuples = rel[s.name];
    const auto count = rng.below(8);
    for (std::uint64_t k = 0; k < count; ++k) {
      Tuple t;
      for (unsigned a = 0; a < s.arity; ++a) t.push_back(static_cast<Element>(rng.below(n)));
      tuples.push_back(t);
    }
  }
  return Structure(vocab, n, rel);
}

}  // namespace

TEST_CASE("empty-relation structure") {
  auto s = parse_structure("structure\nuniverse 2\nend");
  CHECK(s.universe_size() == 2);
  CHECK(s.vocabulary().size() == 0);
  CHECK(serialize_structure(s) == "structure\nuniverse 2\nend\n");
}

TEST_CASE("triangle with endpoint relation") {
  const char* text =
      "structure\n"
      "universe 6\n"
      "# K3, edges are elements 3..5\n"
      "rel E 2\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\nend\n"
      "rel End 2\n0 3\n1 3\n0 4\n2 4\n1 5\n2 5\nend\n"
      "end\n";
  auto s = parse_structure(text);
  CHECK(s.relation("E").size() == 6);
  CHECK(s.relation("End").size() == 6);
  CHECK(s.relation("E").contains(Tuple{2, 1}));
  CHECK_FALSE(s.relation("E").contains(Tuple{1, 1}));
}

TEST_CASE("structure errors") {
  CHECK(error_code("structure\nuniverse 3\nrel E 2\n0 1 2\nend\nend\n") == "model.arity");
  CHECK(error_line("structure\nuniverse 3\nrel E 2\n0 1 2\nend\nend\n") == 4);
  CHECK(error_code("structure\nuniverse 2\nrel E 2\n0 2\nend\nend\n") == "model.range");
  CHECK(error_code("structure\nuniverse 2\nrel E 2\nend\nrel E 2\nend\nend\n") == "model.duplicate");
  CHECK(error_line("structure\nuniverse 2\nrel E 2\nend\nrel E 2\nend\nend\n") == 5);
  CHECK(error_code("structure\nuniverse x\nend\n") == "model.syntax");
  CHECK(error_code("universe 2\nend\n") == "model.syntax");
  CHECK(error_code("structure\nuniverse 2\nrel E 0\nend\nend\n") == "model.syntax");
  CHECK(error_code("structure\nuniverse 2\nend\nextra\n") == "model.syntax");
  CHECK(error_code("structure\nuniverse 2\nrel E 2\n0 1\n") == "model.syntax");
}

TEST_CASE("direct construction validates") {
  Vocabulary v({{"E", 2}});
  CHECK_THROWS_AS(Structure(v, 2, {{"E", {{0, 5}}}}), Error);
  CHECK_THROWS_AS(Structure(v, 2, {{"E", {{0}}}}), Error);
  CHECK_THROWS_AS(Structure(v, 2, {{"F", {{0}}}}), Error);
  CHECK_THROWS_AS(v.add({"E", 1}), Error);
  CHECK_THROWS_AS(v.add({"G", 0}), Error);
}

TEST_CASE("serialization is canonical") {
  auto a = parse_structure("structure\nuniverse 3\nrel E 2\n2 1\n0 1\n0 1\nend\nrel P 1\n2\n0\nend\nend\n");
  auto b = parse_structure("structure\nuniverse 3\nrel E 2\n0 1\n2 1\nend\nrel P 1\n0\n2\nend\nend\n");
  CHECK(serialize_structure(a) == serialize_structure(b));
  CHECK(serialize_structure(a) == "structure\nuniverse 3\nrel E 2\n0 1\n2 1\nend\nrel P 1\n0\n2\nend\nend\n");
  CHECK(a.relation("E").size() == 2);
}

TEST_CASE("parse and serialize round trip on random structures") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    auto s = random_structure(rng);
    auto text = serialize_structure(s);
    auto back = parse_structure(text);
    CHECK(back == s);
    CHECK(serialize_structure(back) == text);
  }
}

TEST_CASE("validation accepts valid and rejects each corrupted variant") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    auto s = random_structure(rng);
    CHECK_NOTHROW(parse_structure(serialize_structure(s)));
    if (s.vocabulary().size() == 0) continue;
    const auto& sym = s.vocabulary().symbols()[0];
    std::string bad_range = "structure\nuniverse " + std::to_string(s.universe_size()) + "\nrel " + sym.name + " " +
                            std::to_string(sym.arity) + "\n";
    for (unsigned a = 0; a < sym.arity; ++a) bad_range += std::to_string(s.universe_size()) + " ";
    bad_range += "\nend\nend\n";
    CHECK(error_code(bad_range) == "model.range");
    std::string bad_arity = "structure\nuniverse " + std::to_string(s.universe_size()) + "\nrel " + sym.name + " " +
                            std::to_string(sym.arity) + "\n";
    for (unsigned a = 0; a <= sym.arity; ++a) bad_arity += "0 ";
    bad_arity += "\nend\nend\n";
    CHECK(error_code(bad_arity) == "model.arity");
  }
}

TEST_CASE("tuple ranks") {
  CHECK(tuple_rank(Tuple{}, 3) == 0);
  CHECK(tuple_rank(Tuple{1, 2}, 3) == 5);
  CHECK(tuple_unrank(5, 2, 3) == Tuple{1, 2});
  for (std::uint64_t r = 0; r < 27; ++r) CHECK(tuple_rank(tuple_unrank(r, 3, 3), 3) == r);
  CHECK(checked_power(3, 4) == 81u);
  CHECK_FALSE(checked_power(2, 64).has_value());
  CHECK_FALSE(checked_power(10, 3, 999).has_value());
  CHECK(checked_power(0, 0) == 1u);
}

TEST_CASE("dense and sparse relations agree") {
  Vocabulary v({{"R", 3}});
  Structure big(v, 300, {{"R", {{1, 2, 3}, {299, 0, 5}}}});
  CHECK_FALSE(big.relation("R").has_dense_index());
  CHECK(big.relation("R").contains(Tuple{299, 0, 5}));
  CHECK_FALSE(big.relation("R").contains(Tuple{299, 0, 4}));
  Structure small(v, 4, {{"R", {{1, 2, 3}}}});
  CHECK(small.relation("R").has_dense_index());
  CHECK(small.relation("R").contains_rank(tuple_rank(Tuple{1, 2, 3}, 4)));
}
