#pragma once

#include <boost/rational.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cgt/word.hpp"

namespace cgt {

using Rational = boost::rational<long long>;

// Finite presentation <X | R>. Relators are stored cyclically reduced,
// nonempty and free of exact duplicates, in input order.
class Presentation {
 public:
  Presentation() = default;
  // Throws Error if a relator is trivial after cyclic reduction.
  Presentation(Alphabet generators, std::vector<Word> const& relators, std::string name = {});

  // Like the constructor, but relators that reduce to the empty word are dropped.
  static Presentation dropping_trivial(Alphabet generators, std::vector<Word> const& relators,
                                       std::string name = {});

  Alphabet const& alphabet() const noexcept { return alphabet_; }
  std::size_t rank() const noexcept { return alphabet_.size(); }
  std::vector<Word> const& relators() const noexcept { return relators_; }
  // Length of the longest relator, 0 without relators.
  std::size_t max_relator_length() const noexcept { return max_len_; }
  std::string const& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  Word parse(std::string_view text) const { return parse_word(text, alphabet_); }
  std::string format(Word const& w) const { return format_word(w, alphabet_); }

 private:
  Alphabet alphabet_;
  std::vector<Word> relators_;
  std::size_t max_len_ = 0;
  std::string name_;
};

// File format: `gens: a b ...`, one or more `rel: <word>` lines, optional
// `name: <label>`, `#` comments, blank lines ignored.
Presentation parse_presentation(std::string_view text);
std::string serialize_presentation(Presentation const& p);
Presentation load_presentation(std::string const& path);
void save_presentation(Presentation const& p, std::string const& path);

// All cyclic permutations of all relators and their inverses, deduplicated
// and sorted lexicographically by letter code.
class SymmetrizedClosure {
 public:
  SymmetrizedClosure() = default;
  explicit SymmetrizedClosure(Presentation const& p);
  // Closure of an arbitrary word list (each nonempty, cyclically reduced).
  explicit SymmetrizedClosure(std::span<const Word> words);

  std::vector<Word> const& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool contains(Word const& w) const;

  // Elements whose first letter is `l`, as a contiguous range.
  std::span<const Word> starting_with(Letter l) const;

  // Calls fn(element, k) for each element whose longest common prefix with
  // text has length k >= min_len. Stops early if fn returns true; returns
  // whether it stopped.
  bool for_each_prefix_match(std::span<const Letter> text, std::size_t min_len,
                             std::function<bool(Word const&, std::size_t)> const& fn) const;

 private:
  void build(std::span<const Word> words);

  std::vector<Word> elements_;
  std::vector<std::size_t> bucket_begin_;  // indexed by letter code, size = codes + 1
};

struct PieceReport {
  Rational lambda{0};
  Word piece;      // a longest-ratio piece
  Word relator;    // closure element it is a prefix of
};

// max |p|/|r| over pieces p and closure elements r having p as a prefix.
// A piece is a common prefix of two distinct closure elements; for a relator
// that is a proper power u^m, the self-overlap of length |r| - |u| also counts.
// Throws Error without relators.
PieceReport small_cancellation_report(Presentation const& p);
Rational small_cancellation_lambda(Presentation const& p);
bool is_c_prime_sixth(Presentation const& p);

// Generators of p2 clashing with p1 get a `_2` suffix (repeated until unique).
// Generators of p2 occupy indices p1.rank() .. p1.rank()+p2.rank()-1.
Presentation direct_product_presentation(Presentation const& p1, Presentation const& p2);

// Commutator a b a^-1 b^-1.
Word commutator(Word const& a, Word const& b);

// Tietze deletion of generators that are trivial in the group: letters of
// `killed` are erased, remaining generators reindexed in order, trivial
// relators dropped. `index_map[g]` is the new index or -1.
struct GeneratorDeletion {
  Presentation result;
  std::vector<long> index_map;
  Word map(Word const& w) const;
};
GeneratorDeletion delete_generators(Presentation const& p, std::vector<std::size_t> const& killed);

// Relabel a word along an index map (generator g -> map[g]).
Word relabel(Word const& w, std::span<const std::size_t> map);

}  // namespace cgt
