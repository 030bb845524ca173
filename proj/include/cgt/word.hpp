#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cgt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed text input; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string const& msg, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A generator or its inverse packed as 2*gen + inverted.
struct Letter {
  std::uint16_t code = 0;

  static constexpr Letter make(std::size_t gen, bool inverted = false) {
    return Letter{static_cast<std::uint16_t>(2 * gen + (inverted ? 1 : 0))};
  }
  constexpr std::size_t gen() const { return code >> 1; }
  constexpr bool inverted() const { return (code & 1) != 0; }
  constexpr int sign() const { return inverted() ? -1 : 1; }
  constexpr Letter inverse() const {
    return Letter{static_cast<std::uint16_t>(code ^ 1)};
  }
  constexpr auto operator<=>(Letter const&) const = default;
};

// Freely reduced word. Every constructor reduces its input.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Letter> raw);
  Word(std::initializer_list<Letter> raw);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  // Subword [pos, pos+len); a subword of a reduced word is reduced.
  Word subword(std::size_t pos, std::size_t len) const;

  bool operator==(Word const&) const = default;

  // Shortlex: shorter first, then lexicographic by letter code.
  friend bool shortlex_less(Word const& a, Word const& b);

 private:
  struct Unchecked {};
  Word(Unchecked, std::vector<Letter> letters) : letters_(std::move(letters)) {}
  friend Word from_reduced(std::vector<Letter> letters);

  std::vector<Letter> letters_;
};

struct ShortlexLess {
  bool operator()(Word const& a, Word const& b) const { return shortlex_less(a, b); }
};

// Wraps letters already known to be freely reduced.
Word from_reduced(std::vector<Letter> letters);

Word reduce(std::span<const Letter> raw);
Word invert(Word const& w);
Word concat(Word const& a, Word const& b);
Word concat(std::initializer_list<Word> parts);
// reduce(x^-1 w x)
Word conjugate(Word const& w, Word const& x);
Word power(Word const& w, long long p);
Word operator*(Word const& a, Word const& b);

struct CyclicReduction {
  Word core;
  Word prefix;  // core == reduce(prefix^-1 * u * prefix)
};
CyclicReduction cyclic_reduce(Word const& u);
bool is_cyclically_reduced(Word const& w);

// Rotation: letters [k..] followed by [..k). Input must be cyclically reduced.
Word rotate(Word const& w, std::size_t k);

// Exponent sum per generator.
std::vector<long long> exponent_sums(Word const& w, std::size_t rank);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  std::string const& name(std::size_t gen) const { return names_.at(gen); }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t add(std::string name);

  static bool valid_name(std::string_view name);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Grammar: whitespace-separated factors `g`, `g^k` (k a nonzero integer).
// The token `1` denotes the empty word.
Word parse_word(std::string_view text, Alphabet const& alphabet,
                std::size_t line = 1, std::size_t column_offset = 0);
// Runs of equal letters are written with exponents: `x x x` -> `x^3`.
std::string format_word(Word const& w, Alphabet const& alphabet);

}  // namespace cgt

template <>
struct std::hash<cgt::Word> {
  std::size_t operator()(cgt::Word const& w) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto l : w) {
      h ^= l.code;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
