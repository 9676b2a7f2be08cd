#include "qsocount/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "qsocount/error.hpp"

namespace qsocount {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || digit(c); });
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::optional<std::uint64_t> parse_uint(std::string_view word) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) return std::nullopt;
  return value;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<Symbol> symbols) {
  for (auto& s : symbols) add(std::move(s));
}

void Vocabulary::add(Symbol symbol) {
  if (!is_identifier(symbol.name))
    throw Error("model.vocabulary", "invalid relation name '" + symbol.name + "'");
  if (symbol.arity == 0)
    throw Error("model.vocabulary", "relation '" + symbol.name + "' must have arity >= 1");
  if (contains(symbol.name))
    throw Error("model.vocabulary", "duplicate relation symbol '" + symbol.name + "'");
  symbols_.push_back(std::move(symbol));
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

const Symbol* Vocabulary::find(std::string_view name) const {
  auto i = index_of(name);
  return i ? &symbols_[*i] : nullptr;
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, std::uint64_t exponent,
                                           std::uint64_t limit) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
  }
  if (result > limit) return std::nullopt;
  return result;
}

std::uint64_t tuple_rank(std::span<const Element> tuple, std::size_t universe_size) {
  std::uint64_t rank = 0;
  for (Element e : tuple) rank = rank * universe_size + e;
  return rank;
}

Tuple tuple_unrank(std::uint64_t rank, unsigned arity, std::size_t universe_size) {
  Tuple t(arity);
  for (unsigned i = arity; i-- > 0;) {
    t[i] = static_cast<Element>(rank % universe_size);
    rank /= universe_size;
  }
  return t;
}

Relation::Relation(unsigned arity, std::size_t universe_size, std::vector<Tuple> tuples)
    : arity_(arity), universe_size_(universe_size), tuples_(std::move(tuples)) {
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
  auto cells = checked_power(universe_size, arity, kDenseLimit);
  if (cells) {
    dense_.assign(*cells, false);
    for (const auto& t : tuples_) dense_[tuple_rank(t, universe_size_)] = true;
  }
}

bool Relation::contains(std::span<const Element> tuple) const {
  if (tuple.size() != arity_) return false;
  if (!dense_.empty() || universe_size_ == 0) {
    for (Element e : tuple)
      if (e >= universe_size_) return false;
    return !dense_.empty() && dense_[tuple_rank(tuple, universe_size_)];
  }
  return std::binary_search(tuples_.begin(), tuples_.end(), tuple,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

Structure::Structure(Vocabulary vocabulary, std::size_t universe_size,
                     std::map<std::string, std::vector<Tuple>> relations)
    : vocabulary_(std::move(vocabulary)), universe_size_(universe_size) {
  for (const auto& [name, _] : relations)
    if (!vocabulary_.contains(name))
      throw Error("model.vocabulary", "relation '" + name + "' is not in the vocabulary");
  relations_.reserve(vocabulary_.size());
  for (const auto& symbol : vocabulary_.symbols()) {
    std::vector<Tuple> tuples;
    if (auto it = relations.find(symbol.name); it != relations.end()) tuples = std::move(it->second);
    for (const auto& t : tuples) {
      if (t.size() != symbol.arity)
        throw Error("model.arity", "tuple of length " + std::to_string(t.size()) +
                                       " in relation '" + symbol.name + "' of arity " +
                                       std::to_string(symbol.arity));
      for (Element e : t)
        if (e >= universe_size_)
          throw Error("model.range", "element " + std::to_string(e) + " in relation '" +
                                         symbol.name + "' is outside universe of size " +
                                         std::to_string(universe_size_));
    }
    relations_.emplace_back(symbol.arity, universe_size_, std::move(tuples));
  }
}

const Relation& Structure::relation(std::string_view name) const {
  auto i = vocabulary_.index_of(name);
  if (!i) throw Error("model.vocabulary", "unknown relation '" + std::string(name) + "'");
  return relations_[*i];
}

// Line-oriented grammar:
//   structure / universe <n> / { rel <name> <arity> / tuples... / end } / end
Structure parse_structure(std::string_view text) {
  enum class State { Header, Universe, Body, InRel, Done };
  State state = State::Header;
  std::size_t universe = 0;
  Vocabulary vocabulary;
  std::map<std::string, std::vector<Tuple>> relations;
  std::string current;
  unsigned current_arity = 0;
  int current_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = split_words(line);
    if (words.empty()) continue;

    auto fail = [&](const std::string& code, const std::string& msg) -> void {
      throw ParseError(code, msg, line_no);
    };

    switch (state) {
      case State::Header:
        if (words.size() != 1 || words[0] != "structure") fail("model.syntax", "expected 'structure'");
        state = State::Universe;
        break;
      case State::Universe: {
        if (words.size() != 2 || words[0] != "universe") fail("model.syntax", "expected 'universe <n>'");
        auto n = parse_uint(words[1]);
        if (!n || *n > UINT32_MAX) fail("model.syntax", "invalid universe size '" + std::string(words[1]) + "'");
        universe = *n;
        state = State::Body;
        break;
      }
      case State::Body:
        if (words.size() == 1 && words[0] == "end") {
          state = State::Done;
        } else if (words[0] == "rel") {
          if (words.size() != 3) fail("model.syntax", "expected 'rel <name> <arity>'");
          std::string name(words[1]);
          if (!is_identifier(name)) fail("model.syntax", "invalid relation name '" + name + "'");
          auto arity = parse_uint(words[2]);
          if (!arity || *arity == 0 || *arity > 64) fail("model.syntax", "invalid arity '" + std::string(words[2]) + "'");
          if (vocabulary.contains(name)) fail("model.duplicate", "duplicate relation block '" + name + "'");
          vocabulary.add({name, static_cast<unsigned>(*arity)});
          relations[name];
          current = name;
          current_arity = static_cast<unsigned>(*arity);
          current_line = line_no;
          state = State::InRel;
        } else {
          fail("model.syntax", "expected 'rel' or 'end'");
        }
        break;
      case State::InRel:
        if (words.size() == 1 && words[0] == "end") {
          state = State::Body;
          break;
        }
        {
          Tuple t;
          for (auto w : words) {
            auto v = parse_uint(w);
            if (!v) fail("model.syntax", "invalid element '" + std::string(w) + "'");
            if (*v >= universe)
              fail("model.range", "element " + std::string(w) + " is outside universe of size " +
                                      std::to_string(universe));
            t.push_back(static_cast<Element>(*v));
          }
          if (t.size() != current_arity)
            fail("model.arity", "tuple length " + std::to_string(t.size()) + " != arity " +
                                    std::to_string(current_arity) + " of '" + current + "'");
          relations[current].push_back(std::move(t));
        }
        break;
      case State::Done:
        fail("model.syntax", "unexpected content after final 'end'");
    }
  }
  if (state != State::Done) {
    std::string msg = state == State::InRel ? "unterminated relation block '" + current + "' (opened at line " +
                                                  std::to_string(current_line) + ")"
                                            : "unexpected end of input";
    throw ParseError("model.syntax", msg, line_no);
  }
  return Structure(std::move(vocabulary), universe, std::move(relations));
}

std::string serialize_structure(const Structure& s) {
  std::ostringstream out;
  out << "structure\nuniverse " << s.universe_size() << '\n';
  const auto& symbols = s.vocabulary().symbols();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out << "rel " << symbols[i].name << ' ' << symbols[i].arity << '\n';
    for (const auto& t : s.relation(i).tuples()) {
      for (std::size_t k = 0; k < t.size(); ++k) out << (k ? " " : "") << t[k];
      out << '\n';
    }
    out << "end\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace qsocount
