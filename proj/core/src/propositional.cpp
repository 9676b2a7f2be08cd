#include "qsocount/propositional.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qsocount/error.hpp"

namespace qsocount {

PropClause canonical_clause(PropClause clause) {
  std::sort(clause.begin(), clause.end(), [](Literal a, Literal b) {
    if (var_of(a) != var_of(b)) return var_of(a) < var_of(b);
    return a < b;
  });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  return clause;
}

bool Disj2SatFormula::is_free(std::uint32_t var) const {
  return var >= 1 && var <= num_vars && !std::binary_search(fixed.begin(), fixed.end(), var);
}

std::vector<std::uint32_t> Disj2SatFormula::free_variables() const {
  std::vector<std::uint32_t> out;
  out.reserve(free_count());
  for (std::uint32_t v = 1; v <= num_vars; ++v)
    if (!std::binary_search(fixed.begin(), fixed.end(), v)) out.push_back(v);
  return out;
}

void validate(const Disj2SatFormula& formula) {
  for (const auto& conj : formula.disjuncts)
    for (const auto& clause : conj) {
      if (clause.size() > 2) throw Error("propcount.range", "clause with more than two literals");
      for (Literal l : clause)
        if (l == 0 || !formula.is_free(var_of(l)))
          throw Error("propcount.range", "literal " + std::to_string(l) + " outside the variable set");
    }
}

void validate(const MonotoneCnf& formula) {
  for (const auto& clause : formula.clauses) {
    if (clause.empty()) throw Error("propcount.format", "empty clause in monotone CNF");
    for (auto v : clause)
      if (v == 0 || v > formula.num_vars)
        throw Error("propcount.range", "variable " + std::to_string(v) + " outside 1.." +
                                           std::to_string(formula.num_vars));
  }
}

namespace {

struct Line {
  int number;
  std::vector<std::string> words;
};

// Non-empty, non-comment lines split on whitespace.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::istringstream in{std::string(text.substr(pos, end - pos))};
    Line line{number, {}};
    for (std::string w; in >> w;) line.words.push_back(w);
    if (!line.words.empty() && line.words[0] != "c" && line.words[0][0] != 'c') out.push_back(std::move(line));
    pos = end + 1;
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("propcount.format", message, line);
}

long long to_int(const std::string& word, int line) {
  long long value = 0;
  auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || p != word.data() + word.size()) fail(line, "expected an integer, got '" + word + "'");
  return value;
}

std::uint32_t to_count(const std::string& word, int line) {
  auto v = to_int(word, line);
  if (v < 0 || v > 0x7fffffff) fail(line, "count out of range: " + word);
  return static_cast<std::uint32_t>(v);
}

}  // namespace

PropFormat detect_format(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("propcount.format", "missing header", 1);
  const auto& h = lines[0];
  if (h.words.size() >= 2 && h.words[0] == "p") {
    if (h.words[1] == "d2s") return PropFormat::D2s;
    if (h.words[1] == "cnf") return PropFormat::Cnf;
  }
  fail(h.number, "expected 'p d2s V k' or 'p cnf V m'");
}

Disj2SatFormula parse_d2s(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) fail(1, "missing 'p d2s V k' header");
  const auto& h = lines[0];
  if (h.words.size() != 4 || h.words[0] != "p" || h.words[1] != "d2s")
    fail(h.number, "expected 'p d2s V k'");
  Disj2SatFormula f;
  f.num_vars = to_count(h.words[2], h.number);
  auto k = to_count(h.words[3], h.number);
  std::size_t i = 1;
  for (std::uint32_t d = 0; d < k; ++d) {
    if (i >= lines.size()) fail(lines.back().number, "expected " + std::to_string(k) + " disjunct blocks");
    const auto& dl = lines[i++];
    if (dl.words.size() != 2 || dl.words[0] != "d") fail(dl.number, "expected 'd m'");
    auto m = to_count(dl.words[1], dl.number);
    TwoSatConjunct conj;
    for (std::uint32_t c = 0; c < m; ++c) {
      if (i >= lines.size()) fail(dl.number, "disjunct declares " + std::to_string(m) + " clauses");
      const auto& cl = lines[i++];
      if (cl.words.empty() || cl.words.back() != "0") fail(cl.number, "clause must end with 0");
      if (cl.words.size() > 3) fail(cl.number, "clause has more than two literals");
      PropClause clause;
      for (std::size_t w = 0; w + 1 < cl.words.size(); ++w) {
        auto lit = to_int(cl.words[w], cl.number);
        if (lit == 0) fail(cl.number, "0 inside a clause");
        if (static_cast<unsigned long long>(lit < 0 ? -lit : lit) > f.num_vars)
          fail(cl.number, "literal " + cl.words[w] + " exceeds V=" + std::to_string(f.num_vars));
        clause.push_back(static_cast<Literal>(lit));
      }
      conj.push_back(canonical_clause(std::move(clause)));
    }
    f.disjuncts.push_back(std::move(conj));
  }
  if (i < lines.size()) fail(lines[i].number, "unexpected content after the last disjunct");
  return f;
}

std::string serialize_d2s(const Disj2SatFormula& formula) {
  if (!formula.fixed.empty()) throw Error("propcount.format", "a restricted formula has no d2s serialization");
  std::string out = "p d2s " + std::to_string(formula.num_vars) + " " + std::to_string(formula.disjuncts.size()) + "\n";
  for (const auto& conj : formula.disjuncts) {
    out += "d " + std::to_string(conj.size()) + "\n";
    for (const auto& raw : conj) {
      auto clause = canonical_clause(raw);
      if (clause.size() == 1) clause.push_back(clause[0]);
      for (Literal l : clause) out += std::to_string(l) + " ";
      out += "0\n";
    }
  }
  return out;
}

MonotoneCnf parse_monotone_dimacs(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) fail(1, "missing 'p cnf V m' header");
  const auto& h = lines[0];
  if (h.words.size() != 4 || h.words[0] != "p" || h.words[1] != "cnf") fail(h.number, "expected 'p cnf V m'");
  MonotoneCnf f;
  f.num_vars = to_count(h.words[2], h.number);
  auto m = to_count(h.words[3], h.number);
  std::vector<std::uint32_t> current;
  int last = h.number;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    last = lines[i].number;
    for (const auto& w : lines[i].words) {
      auto lit = to_int(w, last);
      if (lit < 0) fail(last, "negative literal " + w + " in a monotone CNF");
      if (lit == 0) {
        if (current.empty()) fail(last, "empty clause in a monotone CNF");
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<unsigned long long>(lit) > f.num_vars)
        fail(last, "literal " + w + " exceeds V=" + std::to_string(f.num_vars));
      current.push_back(static_cast<std::uint32_t>(lit));
    }
  }
  if (!current.empty()) fail(last, "last clause is not terminated by 0");
  if (f.clauses.size() != m)
    fail(last, "header declares " + std::to_string(m) + " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

std::string serialize_monotone_dimacs(const MonotoneCnf& formula) {
  std::string out =
      "p cnf " + std::to_string(formula.num_vars) + " " + std::to_string(formula.clauses.size()) + "\n";
  for (const auto& clause : formula.clauses) {
    for (auto v : clause) out += std::to_string(v) + " ";
    out += "0\n";
  }
  return out;
}

}  // namespace qsocount
