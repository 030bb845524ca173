#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgt/constructions.hpp"
#include "cgt/wp.hpp"
#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;

namespace {

// The relator splits as head * tail^-1 with tail a positive {a,b}-word.
bool has_rips_shape(Word const& r, std::size_t head, std::size_t a, std::size_t b, std::size_t tail_len) {
  if (r.size() != head + tail_len) return false;
  for (std::size_t i = head; i < r.size(); ++i)
    if (!r[i].inverted() || (r[i].gen() != a && r[i].gen() != b)) return false;
  return true;
}

}  // namespace

TEST_CASE("Rips relator counts, shapes and small cancellation") {
  for (auto const& q : {z2(), pres("gens: x\n"), z3()}) {
    auto r = rips(q);
    auto const& c = r.certificate;
    std::size_t want = 4 * q.rank() + q.relators().size();
    CHECK(r.g.relators().size() == want);
    CHECK(c.relator_count == want);
    CHECK(c.expected_count == want);
    CHECK(c.lambda < Rational(1, 6));
    CHECK(c.lambda == brute_lambda(r.g));
    CHECK(c.c6);
    CHECK(c.retraction);
    CHECK(c.ok());
    CHECK(r.g.rank() == q.rank() + 2);
    CHECK(r.g.alphabet().name(r.a[0]) == "a");
    CHECK(r.g.alphabet().name(r.a[1]) == "b");
    std::size_t a = r.a[0], b = r.a[1];
    for (std::size_t i = 0; i < 4 * q.rank(); ++i)
      CHECK(has_rips_shape(r.g.relators()[i], 3, a, b, c.word_length));
    for (std::size_t i = 0; i < q.relators().size(); ++i)
      CHECK(has_rips_shape(r.g.relators()[4 * q.rank() + i], q.relators()[i].size(), a, b, c.word_length));
    CHECK(null_product_smoke(r.g, 200, 7) == 0);
  }
  CHECK(rips(z2()).g.relators().size() == 9);
  CHECK(rips(pres("gens: x\n")).g.relators().size() == 4);
}

TEST_CASE("Rips tails: de Bruijn sequences") {
  for (std::size_t m = 1; m <= 8; ++m) {
    auto s = de_bruijn(m);
    CHECK(s.size() == (std::size_t{1} << m) + m - 1);
    std::set<std::vector<bool>> windows;
    for (std::size_t i = 0; i + m <= s.size(); ++i) windows.insert(std::vector<bool>(s.begin() + i, s.begin() + i + m));
    CHECK(windows.size() == (std::size_t{1} << m));
  }
  auto tails = rips_tails(9, 16);
  CHECK(tails.size() == 9);
  for (auto const& t : tails) CHECK(t.size() == 16);
  std::set<std::vector<bool>> distinct(tails.begin(), tails.end());
  CHECK(distinct.size() == 9);
}

TEST_CASE("Rips escalates short tails and honours the cap") {
  auto r = rips(z2(), 4);
  CHECK(r.certificate.ok());
  CHECK(r.certificate.word_length > 4);
  CHECK(r.certificate.attempts > 1);
  CHECK_THROWS_AS(rips(z2(), 4, 8), Error);
  CHECK_THROWS_AS(rips(z2(), 0), Error);
}

TEST_CASE("Rips kernel generator names avoid clashes") {
  auto r = rips(pres("gens: a b\n"));
  CHECK(r.g.alphabet().name(r.a[0]) == "a1");
  CHECK(r.g.alphabet().name(r.a[1]) == "b1");
  CHECK(r.certificate.ok());
}

TEST_CASE("retraction audit") {
  auto r = rips(z2());
  CHECK(retracts_to(r.g, r.a, z2()));
  CHECK_FALSE(retracts_to(r.g, r.a, f2()));
  CHECK_FALSE(retracts_to(r.g, {r.a[0]}, z2()));
}

TEST_CASE("trivial HNN extensions") {
  auto h = trivial_hnn(z(), {z().parse("x^2")});
  CHECK(h.p.alphabet().names() == std::vector<std::string>{"x", "t"});
  CHECK(retracts_to(h.p, {}, pres("gens: x t\nrel: x^2 t x^-2 t^-1\n")));
  // Same group as <x,y | [x^2,y]> with y renamed t.
  auto o1 = make_oracle(h.p);
  auto o2 = make_oracle(ex46());
  std::mt19937_64 rng(81);
  for (int i = 0; i < 200; ++i) {
    Word w = random_word(rng, 2, i % 10);
    CHECK(o1->query(w) == o2->query(w));
  }
  auto e = trivial_hnn(z2(), {});
  CHECK(e.p.relators() == z2().relators());
  CHECK(e.p.rank() == 3);
  auto f = trivial_hnn(f2(), {f2().parse("x")});
  CHECK(retracts_to(f.p, {}, pres("gens: x y t\nrel: t x t^-1 x^-1\n")));
  auto clash = trivial_hnn(pres("gens: t\n"), {pres("gens: t\n").parse("t")});
  CHECK(clash.p.alphabet().name(clash.t) == "t1");
  CHECK_THROWS_AS(trivial_hnn(z(), {Word{Letter::make(3)}}), Error);
}

TEST_CASE("dagger arithmetic on the free group of rank one") {
  auto d = dagger(pres("gens: x\n"));
  CHECK(d.rips.g.rank() == 3);
  CHECK(d.rips.g.relators().size() == 4);
  CHECK(d.gg.rank() == 6);
  CHECK(d.gg.relators().size() == 8 + 9);
  CHECK(d.s_p.size() == 5);
  CHECK(d.qd.rank() == 7);
  CHECK(d.relator_count == 8 + 9 + 5);
  CHECK(d.expected_count == d.relator_count);
  CHECK(d.kill_t);
  CHECK(d.kill_chain);
  CHECK(d.ok());
  CHECK(d.stages.size() == 5);
}

TEST_CASE("dagger on Z^2") {
  auto d = dagger(z2());
  CHECK(d.rips.g.relators().size() == 9);
  CHECK(d.s_p.size() == 2 + 4);
  CHECK(d.qd.relators().size() == 2 * 9 + 16 + 6);
  CHECK(d.ok());
  auto no_t = delete_generators(d.qd, {d.t});
  CHECK(no_t.result.relators() == d.gg.relators());
}
