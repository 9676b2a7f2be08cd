#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsocount {

// Universe elements are bare indices 0..n-1, ordered by index.
using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Symbol {
  std::string name;
  unsigned arity = 0;

  bool operator==(const Symbol&) const = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<Symbol> symbols);

  // Throws model.vocabulary on a duplicate name or zero arity.
  void add(Symbol symbol);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const Symbol* find(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }
  std::size_t size() const { return symbols_.size(); }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

// A set of same-arity tuples, kept sorted and deduplicated. Small relations
// also carry a dense membership bitmap indexed by tuple rank.
class Relation {
 public:
  Relation() = default;
  Relation(unsigned arity, std::size_t universe_size, std::vector<Tuple> tuples);

  unsigned arity() const { return arity_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool contains(std::span<const Element> tuple) const;
  // Dense lookup by tuple rank; only valid when has_dense_index().
  bool has_dense_index() const { return !dense_.empty(); }
  bool contains_rank(std::uint64_t rank) const { return dense_[rank]; }

  bool operator==(const Relation& other) const {
    return arity_ == other.arity_ && tuples_ == other.tuples_;
  }

 private:
  unsigned arity_ = 0;
  std::size_t universe_size_ = 0;
  std::vector<Tuple> tuples_;
  std::vector<bool> dense_;
};

// Finite relational structure. Immutable once built; relations are stored in
// vocabulary order.
class Structure {
 public:
  Structure() = default;

  // Validates every invariant: tuple length equals arity and every index is
  // below universe_size. Duplicate tuples are merged. Throws model.arity or
  // model.range.
  Structure(Vocabulary vocabulary, std::size_t universe_size,
            std::map<std::string, std::vector<Tuple>> relations);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t universe_size() const { return universe_size_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const Relation& relation(std::size_t index) const { return relations_.at(index); }
  const Relation& relation(std::string_view name) const;

  bool operator==(const Structure&) const = default;

 private:
  Vocabulary vocabulary_;
  std::size_t universe_size_ = 0;
  std::vector<Relation> relations_;
};

// First-order assignment: variable name to element.
using FoAssignment = std::map<std::string, Element>;

// Second-order assignment: variable name to (arity, relation).
struct SoValue {
  unsigned arity = 0;
  std::vector<Tuple> tuples;  // sorted, deduplicated
};
using SoAssignment = std::map<std::string, SoValue>;

Structure parse_structure(std::string_view text);
std::string serialize_structure(const Structure& structure);

// Rank of a tuple in the lexicographic order of universe_size^arity tuples.
std::uint64_t tuple_rank(std::span<const Element> tuple, std::size_t universe_size);
Tuple tuple_unrank(std::uint64_t rank, unsigned arity, std::size_t universe_size);

// n^k, or nullopt when it exceeds `limit`.
std::optional<std::uint64_t> checked_power(std::uint64_t base, std::uint64_t exponent,
                                           std::uint64_t limit = UINT64_MAX);

}  // namespace qsocount
