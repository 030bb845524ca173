#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgt/conjugacy.hpp"
#include "cgt/constructions.hpp"
#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;

namespace {

// Free-group conjugacy: cyclic reductions are rotations of each other.
bool free_conjugate(Word const& u, Word const& v) {
  Word a = cyclic_reduce(u).core, b = cyclic_reduce(v).core;
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (rotate(a, k) == b) return true;
  return false;
}

// Shortest gamma with gamma^-1 u gamma = v in F_rank, by enumeration.
std::optional<std::size_t> free_min_conjugator(Word const& u, Word const& v, std::size_t rank, std::size_t cap) {
  for (auto const& g : all_words_up_to(rank, cap))
    if (conjugate(u, g) == v) return g.size();
  return std::nullopt;
}

long long free_cl(long long n, bool max_convention) {
  long long best = 0;
  auto words = all_words_up_to(2, n);
  for (auto const& u : words)
    for (auto const& v : words) {
      long long lu = u.size(), lv = v.size();
      if (max_convention ? std::max(lu, lv) > n : lu + lv > n) continue;
      if (!free_conjugate(u, v)) continue;
      best = std::max<long long>(best, static_cast<long long>(*free_min_conjugator(u, v, 2, 2 * n)));
    }
  return best;
}

FibreSystem f2x() { return make_fibre_system(f2(), {"x"}); }

Word random_p_word(std::mt19937_64& rng, FibreSystem const& sys, std::size_t len) {
  return random_word(rng, sys.p_gens().size(), len);
}

}  // namespace

TEST_CASE("conjugacy search examples") {
  auto of = make_oracle(f2());
  auto same = conjugacy_search(of, f2().parse("x y"), f2().parse("x y"), 3);
  CHECK(same.status == ConjugacySearch::Status::Found);
  CHECK(same.conjugator.empty());
  auto r = conjugacy_search(of, f2().parse("x y"), f2().parse("y x"), 3);
  CHECK(r.status == ConjugacySearch::Status::Found);
  CHECK(r.conjugator == f2().parse("x"));
  auto oz = make_oracle(z2());
  for (std::size_t rad : {1u, 3u, 5u}) {
    auto z = conjugacy_search(oz, z2().parse("x"), z2().parse("y"), rad);
    CHECK(z.status == ConjugacySearch::Status::NotFound);
  }
  CHECK(certified_non_conjugate(*oz, z2().parse("x"), z2().parse("y")));
  CHECK(certified_non_conjugate(*of, f2().parse("x y"), f2().parse("x^2")));
  CHECK_FALSE(certified_non_conjugate(*of, f2().parse("x y"), f2().parse("y x")));
}

TEST_CASE("free-group conjugacy agrees with rotation test and enumeration") {
  auto of = make_oracle(f2());
  std::mt19937_64 rng(71);
  for (int i = 0; i < 300; ++i) {
    Word u = random_word(rng, 2, 1 + i % 4);
    Word v = i % 2 ? conjugate(u, random_word(rng, 2, i % 4)) : random_word(rng, 2, 1 + i % 4);
    auto s = conjugacy_search(of, u, v, 4);
    bool conj = free_conjugate(u, v);
    if (s.status == ConjugacySearch::Status::Found) {
      CHECK(conj);
      CHECK(conjugate(u, s.conjugator) == v);
      CHECK(s.conjugator.size() == *free_min_conjugator(u, v, 2, 4));
    } else if (s.status == ConjugacySearch::Status::NotFound) {
      CHECK_FALSE(free_min_conjugator(u, v, 2, 4));
    }
    CHECK(certified_non_conjugate(*of, u, v) == !conj);
  }
}

TEST_CASE("CL in Z^2 and F2") {
  auto oz = make_oracle(z2());
  for (long long n = 1; n <= 4; ++n) CHECK(cl_g(oz, n).sample.value == 0);
  auto of = make_oracle(f2());
  CLCaps max_caps;
  max_caps.convention = PairConvention::Max;
  for (long long n = 1; n <= 3; ++n) {
    auto s = cl_g(of, n);
    CHECK(s.sample.exactness == Exactness::Exact);
    CHECK(s.sample.value == free_cl(n, false));
    auto m = cl_g(of, n, max_caps);
    CHECK(m.sample.value == free_cl(n, true));
  }
  CHECK(cl_g(of, 2, max_caps).sample.value == 1);
}

TEST_CASE("CL_P on the diagonal system matches CL_G") {
  auto diag = make_fibre_system(f2(), {});
  auto of = make_oracle(f2());
  for (long long n = 1; n <= 4; ++n) {
    auto p = cl_p(diag, n, CLFlavor::P);
    auto g = cl_g(of, n);
    CHECK(p.sample.value == g.sample.value);
  }
}

TEST_CASE("CL_P is dominated by CL_rel at twice the length") {
  auto sys = f2x();
  for (long long n = 1; n <= 2; ++n) {
    auto p = cl_p(sys, n, CLFlavor::P);
    auto r = cl_p(sys, 2 * n, CLFlavor::Rel);
    if (p.sample.exactness == Exactness::Exact && r.sample.exactness == Exactness::Exact)
      CHECK(p.sample.value <= r.sample.value);
  }
}

TEST_CASE("P-conjugacy search") {
  auto sys = f2x();
  auto ball = PBall::build(sys, 4);
  auto const& g = sys.G();
  auto r = p_conjugacy_search(ball, g.parse("x y"), g.parse("y x"), g.parse("y x"), g.parse("x y"));
  REQUIRE(r.status == ConjugacySearch::Status::Found);
  auto [z1, z2] = sys.coordinates(r.p_word);
  CHECK(conjugate(g.parse("x y"), z1) == g.parse("y x"));
  CHECK(conjugate(g.parse("y x"), z2) == g.parse("x y"));
  CHECK(r.p_word.size() == 3);
}

TEST_CASE("constructed conjugator: trivial and diagonal cases") {
  auto sys = f2x();
  auto const& g = sys.G();
  auto c = construct_P_conjugator(g.parse("y"), g.parse("y"), g.parse("y"), g.parse("y"), sys);
  CHECK(c.ok);
  CHECK(c.zeta.empty());
  auto d = construct_P_conjugator(g.parse("x"), Word{}, g.parse("y x y^-1"), Word{}, sys);
  CHECK(d.ok);
  CHECK(d.diagonal_case);
  CHECK(d.p == 0);
  auto bad = construct_P_conjugator(g.parse("y"), Word{}, g.parse("y"), Word{}, sys);
  CHECK_FALSE(bad.ok);
  CHECK(bad.stage == "membership");
}

TEST_CASE("hard instances") {
  auto sys = f2x();
  auto h0 = hard_conjugacy_instance(sys, 0);
  CHECK(h0.u1 == h0.v1);
  CHECK(h0.u2 == h0.v2);
  CHECK(h0.u_p_length == 1u);
  for (long long n = 2; n <= 3; ++n) {
    auto h = hard_conjugacy_instance(sys, n, {8, 400000});
    CHECK(h.bound == static_cast<std::size_t>(2 * n + 2));
    CHECK(h.u_p_length == 1u);
    REQUIRE(h.v_p_length);
    CHECK(h.bound_holds);
    CHECK(*h.v_p_length <= h.bound);
    auto c = construct_P_conjugator(h.u1, h.u2, h.v1, h.v2, sys);
    REQUIRE(c.ok);
    CHECK(c.conjugates == Verdict::Trivial);
    auto [z1, z2] = sys.coordinates(c.zeta);
    CHECK(sys.g_oracle()->equal(conjugate(h.u1, z1), h.v1) == Verdict::Trivial);
    CHECK(sys.g_oracle()->equal(conjugate(h.u2, z2), h.v2) == Verdict::Trivial);
    auto brute = p_conjugacy_search(PBall::build(sys, 6), h.u1, h.u2, h.v1, h.v2);
    if (brute.status == ConjugacySearch::Status::Found) {
      CHECK(brute.p_word.size() <= c.zeta.size());
      auto [b1, b2] = sys.coordinates(brute.p_word);
      CHECK(centraliser_form(b1, b2, h, sys, 8).holds == Verdict::Trivial);
    }
    CHECK(centraliser_form(z1, z2, h, sys, 8).holds == Verdict::Trivial);
  }
}

TEST_CASE("constructed conjugators verify on random conjugate pairs") {
  auto sys = f2x();
  auto ball = PBall::build(sys, 6);
  std::mt19937_64 rng(72);
  std::size_t compared = 0;
  for (int i = 0; i < 30; ++i) {
    Word up = random_p_word(rng, sys, 1 + i % 3), zp = random_p_word(rng, sys, 1 + i % 3);
    auto [u1, u2] = sys.coordinates(up);
    auto [v1, v2] = sys.coordinates(conjugate(up, zp));
    auto c = construct_P_conjugator(u1, u2, v1, v2, sys);
    REQUIRE(c.ok);
    auto [z1, z2] = sys.coordinates(c.zeta);
    CHECK(conjugate(u1, z1) == v1);
    CHECK(conjugate(u2, z2) == v2);
    CHECK(p_membership(z1, z2, sys) == Verdict::Trivial);
    auto b = p_conjugacy_search(ball, u1, u2, v1, v2);
    if (b.status == ConjugacySearch::Status::Found) {
      ++compared;
      CHECK(b.p_word.size() <= c.zeta.size());
    }
  }
  CHECK(compared >= 20);
}

TEST_CASE("torsion step on Rips over Z/3") {
  auto sys = make_fibre_system(rips(z3()).g, {"a", "b"});
  auto const& g = sys.G();
  ConjugatorCaps caps;
  caps.seed = std::make_pair(3LL, 0LL);
  Word x = g.parse("x");
  auto c = construct_P_conjugator(x, x, x, x, sys, caps);
  REQUIRE(c.ok);
  CHECK(c.torsion_step);
  REQUIRE(c.omega);
  CHECK(*c.omega == 3);
  CHECK(2 * std::llabs(c.p_final) <= *c.omega);
  CHECK(c.conjugates == Verdict::Trivial);
}

TEST_CASE("cyclic semigroup membership") {
  auto oz = make_oracle(z());
  auto m = cyclic_semigroup_membership(z().parse("x^3"), z().parse("x"), *oz, 5, true);
  CHECK(m.kind == SemigroupMembership::Kind::Member);
  CHECK(m.p == 3);
  auto n = cyclic_semigroup_membership(z().parse("x^-1"), z().parse("x"), *oz, 5, true);
  CHECK(n.kind == SemigroupMembership::Kind::NonMember);
  auto u = cyclic_semigroup_membership(z().parse("x^-1"), z().parse("x"), *oz, 5, false);
  CHECK(u.kind == SemigroupMembership::Kind::Unknown);
  auto o3 = make_oracle(z3());
  auto t = cyclic_semigroup_membership(z3().parse("x^2"), z3().parse("x"), *o3, 3, true);
  CHECK(t.kind == SemigroupMembership::Kind::Member);
  CHECK(t.p == 2);
}
