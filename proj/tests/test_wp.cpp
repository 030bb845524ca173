#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgt/constructions.hpp"
#include "cgt/wp.hpp"
#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;

namespace {

// A C'(1/6) single-relator presentation found by seeded random search.
Presentation small_cancellation_sample() {
  std::mt19937_64 rng(31);
  for (;;) {
    Word r = cyclic_reduce(random_word(rng, 2, 22)).core;
    if (r.size() < 16) continue;
    Presentation p(Alphabet({"x", "y"}), {r});
    if (is_c_prime_sixth(p)) return p;
  }
}

BallOptions plain_ball(std::size_t radius, std::size_t moves) {
  BallOptions o;
  o.radius = radius;
  o.move_cap = moves;
  o.coset_cap = 0;
  return o;
}

}  // namespace

TEST_CASE("dehn_reduce examples") {
  auto p = small_cancellation_sample();
  for (auto const& r : p.relators()) CHECK(dehn_reduce(p, r).empty());
  CHECK(dehn_reduce(p, Word{}).empty());
  CHECK_THROWS_AS(dehn_reduce(z2(), z2().relators()[0]), Error);
}

TEST_CASE("dehn_reduce on Rips output: products of conjugates vanish") {
  auto g = rips(pres("gens: x\n")).g;
  DehnReducer dehn(g);
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    Word w;
    for (int f = 0; f < 3; ++f) {
      Word r = g.relators()[rng() % g.relators().size()];
      if (rng() % 2) r = invert(r);
      w = w * conjugate(r, random_word(rng, g.rank(), 3));
    }
    auto res = dehn.reduce(w);
    CHECK(res.word.empty());
    CHECK(res.steps <= w.size());
  }
  CHECK(null_product_smoke(g, 200, 5) == 0);
}

TEST_CASE("dehn_reduce never lengthens and agrees with the ball oracle") {
  auto p = small_cancellation_sample();
  DehnReducer dehn(p);
  auto ball = ball_oracle(p, p.max_relator_length() + 12, 3);
  std::mt19937_64 rng(33);
  std::size_t decided = 0;
  for (int i = 0; i < 300; ++i) {
    Word w = random_word(rng, 2, 1 + i % 8);
    if (i % 3 == 0) w = w * conjugate(p.relators()[0], random_word(rng, 2, 2)) * invert(w);
    auto res = dehn.reduce(w);
    CHECK(res.word.size() <= w.size());
    Verdict v = ball->query(w);
    if (v != Verdict::Unknown) {
      ++decided;
      CHECK((v == Verdict::Trivial) == res.word.empty());
    }
  }
  CHECK(decided > 100);
}

TEST_CASE("ball oracle examples") {
  auto o = ball_oracle(z2(), 16, 8);
  CHECK(o->query(z2().parse("x y x^-1 y^-1")) == Verdict::Trivial);
  CHECK(o->query(z2().parse("x")) == Verdict::Nontrivial);
  BallOracle o3(z3(), plain_ball(6, 6));
  CHECK(o3.query(z3().parse("x^2")) == Verdict::Nontrivial);
  CHECK(o3.query(z3().parse("x^-3")) == Verdict::Trivial);
}

TEST_CASE("oracles agree with independent deciders") {
  std::mt19937_64 rng(34);
  auto oz2 = make_oracle(z2());
  auto oz3 = make_oracle(z3());
  auto of2 = make_oracle(f2());
  BallOracle bz2(z2(), plain_ball(14, 10));
  std::size_t bz2_decided = 0;
  for (int i = 0; i < 600; ++i) {
    Word w = random_word(rng, 2, i % 12);
    auto s = sums(w, 2);
    bool z2_trivial = s[0] == 0 && s[1] == 0;
    CHECK((oz2->query(w) == Verdict::Trivial) == z2_trivial);
    CHECK((of2->query(w) == Verdict::Trivial) == w.empty());
    Verdict b = bz2.query(w);
    if (b != Verdict::Unknown) {
      ++bz2_decided;
      CHECK((b == Verdict::Trivial) == z2_trivial);
    }
    Word u = random_word(rng, 1, i % 10);
    CHECK((oz3->query(u) == Verdict::Trivial) == (sums(u, 1)[0] % 3 == 0));
  }
  CHECK(bz2_decided > 300);
}

TEST_CASE("Britton oracle on <x,y | [x^2,y]> agrees with bounded search") {
  auto p = ex46();
  auto o = make_oracle(p);
  CHECK(o->kind() == "britton");
  CHECK(o->query(p.parse("y x y^-1 y x y^-1 x^-2")) == Verdict::Trivial);
  for (int n = 1; n <= 3; ++n) {
    Word c = conjugate(p.parse("x"), power(p.parse("y"), -n));
    CHECK(o->query(power(c, 2) * p.parse("x^-2")) == Verdict::Trivial);
    CHECK(o->query(c * p.parse("x^-1")) == Verdict::Nontrivial);
  }
  BallOracle ball(p, plain_ball(12, 5));
  std::mt19937_64 rng(35);
  for (int i = 0; i < 300; ++i) {
    Word w = random_word(rng, 2, i % 9);
    if (i % 2) w = w * conjugate(p.relators()[0], random_word(rng, 2, 2)) * invert(w);
    Verdict b = ball.query(w);
    if (b != Verdict::Unknown) CHECK(b == o->query(w));
  }
}

TEST_CASE("product oracle") {
  auto f = make_oracle(f2());
  auto g = renamed_oracle(make_oracle(f2()), Alphabet({"u", "v"}));
  auto prod = product_oracle(f, g);
  CHECK(prod->rank() == 4);
  // x from the first factor, v from the second.
  CHECK(prod->query(Word{Letter::make(0), Letter::make(3)}) == Verdict::Nontrivial);
  CHECK(prod->query(Word{}) == Verdict::Trivial);
  auto c3 = product_oracle(make_oracle(z3()), renamed_oracle(make_oracle(z3()), Alphabet({"y"})));
  Word w{Letter::make(0), Letter::make(0), Letter::make(0), Letter::make(1), Letter::make(1), Letter::make(1)};
  CHECK(c3->query(w) == Verdict::Trivial);
  CHECK(c3->query(Word{Letter::make(0), Letter::make(1, true)}) == Verdict::Nontrivial);
  CHECK_THROWS_AS(product_oracle(f, make_oracle(f2())), Error);
}

TEST_CASE("order_of") {
  auto o3 = make_oracle(z3());
  auto ord = order_of(z3().parse("x"), *o3, 10);
  CHECK(ord.finite());
  CHECK(ord.value == 3);
  auto inf = order_of(z2().parse("x"), *make_oracle(z2()), 10);
  CHECK(inf.infinite());
  CHECK(inf.value == 10);
  CHECK(inf.proven_infinite);
  auto e = ex46();
  auto t = order_of(e.parse("y x y^-1 y x y^-1 x^-2"), *make_oracle(e), 5);
  CHECK(t.finite());
  CHECK(t.value == 1);
}

TEST_CASE("order is a conjugacy invariant") {
  std::mt19937_64 rng(36);
  auto p = pres("gens: x y\nrel: x^3\nrel: y^2\nrel: x y x y\n");  // S3
  auto o = make_oracle(p);
  for (int i = 0; i < 100; ++i) {
    Word w = random_word(rng, 2, 1 + i % 6), c = random_word(rng, 2, i % 5);
    auto a = order_of(w, *o, 12), b = order_of(conjugate(w, c), *o, 12);
    if (a.kind != Order::Kind::Unknown && b.kind != Order::Kind::Unknown) {
      CHECK(a.kind == b.kind);
      CHECK(a.value == b.value);
    }
    CHECK(a.finite());
    CHECK(6 % a.value == 0);
  }
}

TEST_CASE("abelianization filter never contradicts a trivial verdict") {
  auto p = ex46();
  AbelianLattice lat(p);
  auto o = make_oracle(p);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i) {
    Word w = random_word(rng, 2, i % 10);
    if (o->query(w) == Verdict::Trivial) CHECK(lat.contains(exponent_sums(w, 2)));
  }
}

TEST_CASE("coset enumeration") {
  auto s3 = CosetTable::enumerate(pres("gens: x y\nrel: x^3\nrel: y^2\nrel: x y x y\n"), 100);
  REQUIRE(s3);
  CHECK(s3->order() == 6);
  auto q8 = CosetTable::enumerate(pres("gens: i j\nrel: i^4\nrel: i^2 j^-2\nrel: j^-1 i j i\n"), 200);
  REQUIRE(q8);
  CHECK(q8->order() == 8);
  CHECK_FALSE(CosetTable::enumerate(z2(), 50));
}

TEST_CASE("oracle stats") {
  auto o = ball_oracle(z2(), 16, 8);
  o->query(z2().parse("x^2 y^2 x^-2 y^-2"));
  auto st = o->stats();
  CHECK(st.queries == 1);
  CHECK(st.trivial == 1);
}
