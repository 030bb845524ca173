#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;

namespace {

Alphabet xy() { return Alphabet({"x", "y"}); }
Word w(std::string const& s) { return parse_word(s, xy()); }
constexpr Letter X = Letter::make(0), Xi = Letter::make(0, true), Y = Letter::make(1), Yi = Letter::make(1, true);

}  // namespace

TEST_CASE("reduce examples") {
  CHECK(reduce(std::vector<Letter>{X, Xi, Y}) == Word{Y});
  CHECK(reduce(std::vector<Letter>{}).empty());
  std::vector<Letter> raw{X, Y, Yi, X, Xi, X};
  Word r = reduce(raw);
  CHECK(r == Word{X, X});
  CHECK(letters(r) == stack_reduce(raw));
}

TEST_CASE("reduce agrees with a stack reducer and is idempotent") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto raw = random_letters(rng, 3, i % 40);
    Word r = reduce(raw);
    CHECK(letters(r) == stack_reduce(raw));
    CHECK(reduce(r.letters()) == r);
  }
}

TEST_CASE("word algebra examples") {
  CHECK(invert(Word{X, Y}) == Word{Yi, Xi});
  CHECK(power(Word{X}, 3) == Word{X, X, X});
  CHECK(conjugate(Word{Y}, Word{X}) == Word{Xi, Y, X});
  CHECK(power(w("x y"), -2) == w("y^-1 x^-1 y^-1 x^-1"));
  CHECK(power(w("x y"), 0).empty());
  CHECK(concat({w("x y"), w("y^-1"), w("x^-1")}).empty());
}

TEST_CASE("word algebra properties") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    Word a = random_word(rng, 2, 1 + i % 15), b = random_word(rng, 2, i % 9);
    CHECK(concat(a, invert(a)).empty());
    CHECK(invert(invert(a)) == a);
    CHECK(invert(a * b) == invert(b) * invert(a));
    std::vector<Letter> raw = letters(a);
    raw.insert(raw.end(), b.begin(), b.end());
    CHECK(letters(a * b) == stack_reduce(raw));
    std::vector<Letter> conj = letters(invert(b));
    conj.insert(conj.end(), a.begin(), a.end());
    conj.insert(conj.end(), b.begin(), b.end());
    CHECK(letters(conjugate(a, b)) == stack_reduce(conj));
    long long p = static_cast<long long>(i % 7) - 3;
    CHECK(power(a, p).size() <= static_cast<std::size_t>(std::llabs(p)) * a.size());
  }
}

TEST_CASE("cyclic_reduce examples") {
  auto c = cyclic_reduce(w("x y x^-1"));
  CHECK(c.core == w("y"));
  CHECK(c.prefix == w("x"));
  c = cyclic_reduce(w("y"));
  CHECK(c.core == w("y"));
  CHECK(c.prefix.empty());
  c = cyclic_reduce(w("x x y x^-1 x^-1"));
  CHECK(c.core == w("y"));
  CHECK(c.prefix == w("x^2"));
}

TEST_CASE("cyclic_reduce properties") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    Word u = random_word(rng, 2, i % 20);
    auto c = cyclic_reduce(u);
    if (!c.core.empty()) {
      CHECK(c.core.front().code != (c.core.back().code ^ 1));
      CHECK(is_cyclically_reduced(c.core));
    }
    CHECK(c.core.size() + 2 * c.prefix.size() >= u.size());
    CHECK(c.core == conjugate(u, c.prefix));
    CHECK(u == c.prefix * c.core * invert(c.prefix));
    // Outer cancellation peeled one layer at a time.
    std::vector<Letter> peel = letters(u);
    std::size_t layers = 0;
    while (peel.size() >= 2 && peel.front().code == (peel.back().code ^ 1)) {
      peel.erase(peel.begin());
      peel.pop_back();
      ++layers;
    }
    CHECK(letters(c.core) == peel);
    CHECK(c.prefix.size() == layers);
  }
}

TEST_CASE("rotate and exponent sums") {
  CHECK(rotate(w("x y x^-1 y^-1"), 1) == w("y x^-1 y^-1 x"));
  CHECK(rotate(w("x y"), 0) == w("x y"));
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    Word u = random_word(rng, 3, i % 12);
    CHECK(exponent_sums(u, 3) == sums(u, 3));
  }
}

TEST_CASE("shortlex order") {
  CHECK(shortlex_less(w("y"), w("x x")));
  CHECK(shortlex_less(w("x"), w("y")));
  CHECK_FALSE(shortlex_less(w("x"), w("x")));
}

TEST_CASE("text round trip") {
  Alphabet al = xy();
  CHECK(format_word(parse_word("x x x", al), al) == "x^3");
  CHECK(format_word(parse_word("x^2 y^-1 y^-2", al), al) == "x^2 y^-3");
  CHECK(parse_word("1", al).empty());
  CHECK(parse_word("x^-1 x", al).empty());
  std::mt19937_64 rng(15);
  for (int i = 0; i < 500; ++i) {
    Word u = random_word(rng, 2, i % 16);
    if (u.empty()) continue;
    CHECK(parse_word(format_word(u, al), al) == u);
  }
}

TEST_CASE("parse errors") {
  Alphabet al = xy();
  CHECK_THROWS_AS(parse_word("z", al), ParseError);
  CHECK_THROWS_AS(parse_word("x^0", al), ParseError);
  CHECK_THROWS_AS(parse_word("x^", al), ParseError);
  try {
    parse_word("x q", al);
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.column() == 3);
  }
}

TEST_CASE("alphabet") {
  Alphabet al({"x", "y"});
  CHECK(al.find("y") == 1u);
  CHECK_FALSE(al.find("z"));
  CHECK_THROWS_AS(Alphabet({"x", "x"}), Error);
}
