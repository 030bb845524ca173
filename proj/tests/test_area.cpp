#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgt/area.hpp"
#include "cgt/wp.hpp"
#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;

namespace {

// Twice the signed area enclosed by the lattice path of a closed Z^2 word.
long long shoelace2(Word const& w) {
  long long x = 0, y = 0, s = 0;
  for (auto l : w) {
    long long nx = x, ny = y;
    (l.gen() == 0 ? nx : ny) += l.sign();
    s += x * ny - nx * y;
    x = nx;
    y = ny;
  }
  return s;
}

FunctionTable table(Presentation const& p, std::string const& fn, long long n, FunctionCaps caps = {}) {
  FunctionContext ctx(p, make_oracle(p), caps);
  return function_table(ctx, fn, n);
}

}  // namespace

TEST_CASE("area examples") {
  auto p = z2();
  auto r = area(p, p.parse("x y x^-1 y^-1"));
  CHECK(r.exact());
  CHECK(r.area == 1);
  auto e = area(p, Word{});
  CHECK(e.exact());
  CHECK(e.area == 0);
  for (long long n = 1; n <= 3; ++n) {
    Word x = power(p.parse("x"), n), y = power(p.parse("y"), n);
    Word c = commutator(x, y);
    auto a = area(p, c, {0, 16, 4000000});
    REQUIRE(a.exact());
    CHECK(static_cast<long long>(a.area) * 2 == std::llabs(shoelace2(c)));
    CHECK(a.area == static_cast<std::size_t>(n * n));
    REQUIRE(a.certificate);
    CHECK(verify_decomposition(c, *a.certificate, p));
    CHECK(a.certificate->area() == a.area);
  }
}

TEST_CASE("area on Z^2 is at least the enclosed signed area") {
  auto p = z2();
  std::mt19937_64 rng(41);
  std::size_t checked = 0;
  for (int i = 0; i < 400 && checked < 60; ++i) {
    Word w = random_word(rng, 2, 2 + i % 8);
    auto s = sums(w, 2);
    // Close the path along the axes.
    w = w * power(p.parse("x"), -s[0]) * power(p.parse("y"), -s[1]);
    if (w.empty() || w.size() > 10) continue;
    auto a = area(p, w, {0, 12, 2000000});
    if (!a.exact()) continue;
    ++checked;
    CHECK(2 * static_cast<long long>(a.area) >= std::llabs(shoelace2(w)));
  }
  CHECK(checked >= 30);
}

TEST_CASE("verify_decomposition") {
  auto p = z2();
  Word r = p.relators()[0];
  AreaDecomposition d;
  d.factors.push_back({Word{}, r});
  d.noise = decomposition_noise(d.factors);
  CHECK(verify_decomposition(r, d, p));
  CHECK_FALSE(verify_decomposition(p.parse("x"), d, p));
  AreaDecomposition bad = d;
  bad.factors[0].rho = p.parse("x y");
  CHECK_FALSE(verify_decomposition(p.parse("x y"), bad, p));
  AreaDecomposition wrong_noise = d;
  wrong_noise.noise = 5;
  CHECK_FALSE(verify_decomposition(r, wrong_noise, p));
}

TEST_CASE("areas match an independent insertion search on tiny instances") {
  for (auto const& p : {z2(), z3()}) {
    auto o = make_oracle(p);
    for (auto const& w : all_words_up_to(p.rank(), 6)) {
      if (o->query(w) != Verdict::Trivial) continue;
      auto a = area(p, w, {0, 16, 2000000});
      REQUIRE(a.exact());
      auto b = insertion_bfs_area(p, w, 12, 6);
      REQUIRE(b);
      CHECK(a.area == *b);
    }
  }
}

TEST_CASE("certificates verify and meet the noise bound") {
  std::mt19937_64 rng(42);
  for (auto const& p : {z2(), z3(), ex46()}) {
    SymmetrizedClosure cl(p);
    for (int i = 0; i < 40; ++i) {
      Word w;
      for (int f = 0; f < 1 + i % 3; ++f) {
        Word r = cl.elements()[rng() % cl.size()];
        w = w * conjugate(r, random_word(rng, p.rank(), rng() % 3));
      }
      auto a = area(p, w, {0, 8, 1000000});
      if (!a.found()) continue;
      REQUIRE(a.certificate);
      CHECK(verify_decomposition(w, *a.certificate, p));
      CHECK(a.certificate->area() == a.area);
      CHECK(a.area <= 3);
      if (a.noise_within_bound) CHECK(a.certificate->noise <= a.area * p.max_relator_length() + w.size());
      auto m = minimize_noise(*a.certificate);
      CHECK(verify_decomposition(w, m, p));
      CHECK(m.noise <= a.certificate->noise);
    }
  }
}

TEST_CASE("Dehn function samples") {
  auto t = table(z2(), "delta", 6);
  std::vector<long long> want{0, 0, 0, 1, 1, 2};
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(t.samples[i].exactness == Exactness::Exact);
    CHECK(t.samples[i].value == want[i]);
  }
  auto t3 = table(z3(), "delta", 6);
  CHECK(t3.samples[5].value == 2);
  CHECK(t3.samples[5].exactness == Exactness::Exact);
}

TEST_CASE("Dehn function agrees with exhaustive search") {
  for (auto const& p : {z2(), z3()}) {
    auto o = make_oracle(p);
    auto t = table(p, "delta", 6);
    for (long long n = 1; n <= 6; ++n) {
      long long best = 0;
      for (auto const& w : all_words_up_to(p.rank(), n))
        if (o->query(w) == Verdict::Trivial)
          best = std::max<long long>(best, static_cast<long long>(*insertion_bfs_area(p, w, 12, 8)));
      CHECK(t.samples[n - 1].value == best);
    }
  }
}

TEST_CASE("rel-cyclics family") {
  auto tz = table(z(), "delta_c", 3);
  CHECK(tz.samples[1].value >= 2);
  for (auto const& p : {z2(), f2(), ex46(), z()}) {
    auto c = table(p, "delta_c", 4), zz = table(p, "delta_z", 4), o = table(p, "delta_o", 4);
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
      if (c.samples[i].exactness != Exactness::Exact || zz.samples[i].exactness != Exactness::Exact ||
          o.samples[i].exactness != Exactness::Exact)
        continue;
      CHECK(c.samples[i].value == zz.samples[i].value);
      CHECK(c.samples[i].value == o.samples[i].value);
    }
  }
  auto o3 = table(z3(), "delta_o", 1);
  CHECK(o3.samples[0].value >= 4);
}

TEST_CASE("delta is bounded by delta_o and monotone") {
  for (auto const& p : {z2(), z3()}) {
    auto d = table(p, "delta", 5), o = table(p, "delta_o", 5);
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      if (d.samples[i].exactness == Exactness::Exact && o.samples[i].exactness == Exactness::Exact)
        CHECK(d.samples[i].value <= o.samples[i].value);
      if (i > 0) CHECK(d.samples[i - 1].value <= d.samples[i].value);
    }
  }
}

TEST_CASE("return of cyclics and torsion evolution") {
  CHECK(table(z(), "frak_m", 3).samples[2].value == 3);
  CHECK(table(f2(), "frak_m", 2).samples[1].value == 2);
  auto t = table(z3(), "frak_t", 1);
  CHECK(t.samples[0].value == 3);
  CHECK(t.samples[0].exactness == Exactness::Exact);
}

TEST_CASE("max convention is accepted") {
  FunctionCaps caps;
  caps.convention = PairConvention::Max;
  auto s = table(z(), "delta_c", 2, caps), m = table(z(), "delta_c", 2);
  CHECK(s.samples[1].value >= m.samples[1].value);
}

TEST_CASE("words_of_length and cyclic_canonical") {
  CHECK(words_of_length(2, 2).size() == 12);
  CHECK(words_of_length(1, 3).size() == 2);
  auto p = f2();
  CHECK(cyclic_canonical(p.parse("y x")) == cyclic_canonical(p.parse("x y")));
  CHECK(cyclic_canonical(p.parse("x y")) == cyclic_canonical(p.parse("y^-1 x^-1")));
  CHECK(cyclic_canonical(p.parse("y x y^-1")) == p.parse("x"));
}
