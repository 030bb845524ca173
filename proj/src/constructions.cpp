#include "cgt/constructions.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "cgt/wp.hpp"

namespace cgt {

namespace {

std::string fresh_name(Alphabet const& al, std::string const& base) {
  if (!al.find(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string n = base + std::to_string(k);
    if (!al.find(n)) return n;
  }
}

Word positive(std::vector<bool> const& tail, std::size_t a, std::size_t b) {
  std::vector<Letter> out;
  for (bool is_b : tail) out.push_back(Letter::make(is_b ? b : a));
  return from_reduced(std::move(out));
}

// Least rotation of w or w^-1.
Word cyclic_key(Word const& w) {
  Word best;
  bool set = false;
  for (Word const& c : {w, invert(w)})
    for (std::size_t k = 0; k < std::max<std::size_t>(c.size(), 1); ++k) {
      Word r = rotate(c, k);
      if (!set || shortlex_less(r, best)) {
        best = std::move(r);
        set = true;
      }
    }
  return best;
}

std::set<Word, ShortlexLess> cyclic_set(Presentation const& p) {
  std::set<Word, ShortlexLess> s;
  for (auto const& r : p.relators()) s.insert(cyclic_key(r));
  return s;
}

bool same_presentation(Presentation const& x, Presentation const& y) {
  return x.alphabet().names() == y.alphabet().names() && x.relators() == y.relators();
}

}  // namespace

std::vector<bool> de_bruijn(std::size_t m) {
  std::vector<bool> seq;
  std::vector<int> a(m + 1, 0);
  auto gen = [&](auto&& self, std::size_t t, std::size_t p) -> void {
    if (t > m) {
      if (m % p == 0)
        for (std::size_t j = 1; j <= p; ++j) seq.push_back(a[j] != 0);
      return;
    }
    a[t] = a[t - p];
    self(self, t + 1, p);
    for (int j = a[t - p] + 1; j < 2; ++j) {
      a[t] = j;
      self(self, t + 1, t);
    }
  };
  gen(gen, 1, 1);
  for (std::size_t j = 0; j + 1 < m; ++j) seq.push_back(seq[j]);
  return seq;
}

std::vector<std::vector<bool>> rips_tails(std::size_t count, std::size_t word_length) {
  std::size_t m = 1;
  while ((std::size_t{1} << m) + m - 1 < count * word_length) ++m;
  auto seq = de_bruijn(m);
  std::vector<std::vector<bool>> tails;
  for (std::size_t t = 0; t < count; ++t)
    tails.emplace_back(seq.begin() + t * word_length, seq.begin() + (t + 1) * word_length);
  return tails;
}

bool retracts_to(Presentation const& p, std::vector<std::size_t> const& killed, Presentation const& expected) {
  auto del = delete_generators(p, killed);
  return del.result.alphabet().names() == expected.alphabet().names() &&
         cyclic_set(del.result) == cyclic_set(expected);
}

RipsResult rips(Presentation const& q, std::size_t word_length, std::size_t max_word_length) {
  if (word_length == 0) throw Error("tail length must be positive");
  Alphabet al = q.alphabet();
  std::string an = fresh_name(al, "a");
  al.add(an);
  std::string bn = fresh_name(al, "b");
  al.add(bn);
  std::size_t nx = q.rank(), a = nx, b = nx + 1;
  std::size_t slots = 4 * nx + q.relators().size();

  std::size_t attempts = 0;
  for (std::size_t L = word_length; L <= max_word_length; L *= 2) {
    ++attempts;
    auto tails = rips_tails(slots, L);
    std::vector<Word> rels;
    std::size_t k = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      Word X{Letter::make(x)}, Xi = invert(X), A{Letter::make(a)}, B{Letter::make(b)};
      for (auto const& head : {concat({X, A, Xi}), concat({X, B, Xi}), concat({Xi, A, X}), concat({Xi, B, X})})
        rels.push_back(head * invert(positive(tails[k++], a, b)));
    }
    for (auto const& r : q.relators()) rels.push_back(r * invert(positive(tails[k++], a, b)));

    RipsResult out;
    std::string name = q.name().empty() ? std::string("rips") : "rips(" + q.name() + ")";
    out.g = Presentation(al, rels, name);
    out.a = {a, b};
    auto& c = out.certificate;
    c.q = q;
    c.g = out.g;
    c.a_name = an;
    c.b_name = bn;
    c.word_length = L;
    c.attempts = attempts;
    c.tail_scheme = "consecutive length-" + std::to_string(L) + " segments of a binary de Bruijn sequence";
    c.relator_count = out.g.relators().size();
    c.expected_count = slots;
    c.lambda = small_cancellation_lambda(out.g);
    c.c6 = c.lambda < Rational(1, 6);
    c.retraction = retracts_to(out.g, out.a, q);
    if (c.ok()) return out;
  }
  throw Error("Rips construction: no C'(1/6) tails up to length " + std::to_string(max_word_length));
}

std::size_t null_product_smoke(Presentation const& g, std::size_t count, std::uint64_t seed,
                               std::size_t max_factors, std::size_t conj_length) {
  if (g.relators().empty()) throw Error("null products need relators");
  DehnReducer dehn(g);
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::size_t failures = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Word w;
    std::size_t factors = 1 + pick(max_factors);
    for (std::size_t f = 0; f < factors; ++f) {
      Word r = g.relators()[pick(g.relators().size())];
      if (pick(2)) r = invert(r);
      std::vector<Letter> c;
      std::size_t len = pick(conj_length + 1);
      for (std::size_t k = 0; k < len; ++k) c.push_back(Letter{static_cast<std::uint16_t>(pick(2 * g.rank()))});
      w = w * conjugate(r, reduce(c));
    }
    if (!dehn.reduce(w).word.empty()) ++failures;
  }
  return failures;
}

HnnResult trivial_hnn(Presentation const& gamma, std::vector<Word> const& h_gens, std::string const& t_name) {
  Alphabet al = gamma.alphabet();
  HnnResult out;
  out.t = al.size();
  al.add(fresh_name(al, t_name));
  std::vector<Word> rels = gamma.relators();
  Word t{Letter::make(out.t)};
  for (auto const& h : h_gens) {
    for (auto l : h)
      if (l.gen() >= gamma.rank()) throw Error("subgroup generator uses a letter outside the group");
    if (!h.empty()) rels.push_back(commutator(t, h));
  }
  std::string name = gamma.name().empty() ? std::string{} : gamma.name() + "*t";
  out.p = Presentation(al, rels, name);
  return out;
}

DaggerResult dagger(Presentation const& q, std::size_t word_length, std::size_t max_word_length) {
  DaggerResult d;
  auto r = rips(q, word_length, max_word_length);
  d.rips = r.certificate;
  d.stages.push_back("rips: " + std::to_string(r.g.rank()) + " generators, " +
                     std::to_string(r.g.relators().size()) + " relators, tails " +
                     std::to_string(r.certificate.word_length));
  d.gg = direct_product_presentation(r.g, r.g);
  d.stages.push_back("square: " + std::to_string(d.gg.rank()) + " generators, " +
                     std::to_string(d.gg.relators().size()) + " relators");
  std::size_t rank = r.g.rank();
  auto const& gn = r.g.alphabet();
  for (auto a : r.a) {
    d.s_p.push_back(Word{Letter::make(a)});
    d.s_p_names.push_back("(" + gn.name(a) + ",1)");
  }
  for (std::size_t x = 0; x < rank; ++x) {
    d.s_p.push_back(Word{Letter::make(x), Letter::make(rank + x)});
    d.s_p_names.push_back("(" + gn.name(x) + "," + gn.name(x) + ")");
  }
  d.stages.push_back("fibre generators: " + std::to_string(d.s_p.size()));
  auto h = trivial_hnn(d.gg, d.s_p);
  d.qd = h.p;
  d.qd.set_name(q.name().empty() ? std::string("dagger") : "dagger(" + q.name() + ")");
  d.t = h.t;
  d.stages.push_back("hnn: stable letter " + d.qd.alphabet().name(d.t) + ", " +
                     std::to_string(d.qd.relators().size()) + " relators");
  d.relator_count = d.qd.relators().size();
  d.expected_count = d.gg.relators().size() + d.s_p.size();

  auto no_t = delete_generators(d.qd, {d.t});
  d.kill_t = same_presentation(no_t.result, d.gg);
  std::vector<std::size_t> second;
  for (std::size_t x = 0; x < rank; ++x) second.push_back(rank + x);
  auto first = delete_generators(no_t.result, second);
  d.kill_chain = retracts_to(first.result, r.a, q);
  d.stages.push_back(std::string("retractions: kill t ") + (d.kill_t ? "ok" : "FAILED") + ", kill factor and {a,b} " +
                     (d.kill_chain ? "ok" : "FAILED"));
  return d;
}

}  // namespace cgt
