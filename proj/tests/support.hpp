#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cgt/presentation.hpp"

namespace cgt::testing {

inline Presentation pres(std::string const& text) { return parse_presentation(text); }

inline Presentation z() { return pres("gens: x\n"); }
inline Presentation z2() { return pres("gens: x y\nrel: x y x^-1 y^-1\n"); }
inline Presentation f2() { return pres("gens: x y\n"); }
inline Presentation z3() { return pres("gens: x\nrel: x^3\n"); }
inline Presentation ex46() { return pres("gens: x y\nrel: x^2 y x^-2 y^-1\n"); }

// Raw letter sequence, not reduced.
inline std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t rank, std::size_t len) {
  std::uniform_int_distribution<int> d(0, static_cast<int>(2 * rank) - 1);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(Letter{static_cast<std::uint16_t>(d(rng))});
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t len) {
  return reduce(random_letters(rng, rank, len));
}

// Free reduction by a stack, independent of the library's reducer.
inline std::vector<Letter> stack_reduce(std::vector<Letter> const& raw) {
  std::vector<Letter> st;
  for (auto l : raw) {
    if (!st.empty() && st.back().code == (l.code ^ 1))
      st.pop_back();
    else
      st.push_back(l);
  }
  return st;
}

inline std::vector<Letter> letters(Word const& w) { return {w.begin(), w.end()}; }

// Exponent-sum vector computed letter by letter.
inline std::vector<long long> sums(Word const& w, std::size_t rank) {
  std::vector<long long> s(rank, 0);
  for (auto l : w) s[l.gen()] += l.inverted() ? -1 : 1;
  return s;
}

// All rotations of relators and their inverses, built from scratch.
inline std::set<std::vector<Letter>> brute_closure(Presentation const& p) {
  std::set<std::vector<Letter>> out;
  for (auto const& r : p.relators())
    for (Word const& s : {r, invert(r)}) {
      auto v = letters(s);
      for (std::size_t k = 0; k < v.size(); ++k) {
        std::vector<Letter> rot(v.begin() + k, v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + k);
        out.insert(rot);
      }
    }
  return out;
}

// Area by breadth-first search where a move inserts a closure element at any
// position and freely reduces. No noise pruning; nullopt past max_depth.
inline std::optional<std::size_t> insertion_bfs_area(Presentation const& p, Word const& w, std::size_t length_cap,
                                                    std::size_t max_depth) {
  auto cl = brute_closure(p);
  std::set<std::vector<Letter>> seen{letters(w)};
  std::vector<std::vector<Letter>> layer{letters(w)};
  for (std::size_t d = 0; d <= max_depth; ++d) {
    std::vector<std::vector<Letter>> next;
    for (auto const& u : layer) {
      if (u.empty()) return d;
      for (std::size_t pos = 0; pos <= u.size(); ++pos)
        for (auto const& c : cl) {
          std::vector<Letter> raw(u.begin(), u.begin() + pos);
          raw.insert(raw.end(), c.begin(), c.end());
          raw.insert(raw.end(), u.begin() + pos, u.end());
          auto red = stack_reduce(raw);
          if (red.size() <= length_cap && seen.insert(red).second) next.push_back(std::move(red));
        }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

inline std::size_t smallest_period(std::vector<Letter> const& v) {
  for (std::size_t d = 1; d < v.size(); ++d)
    if (v.size() % d == 0 && std::equal(v.begin() + d, v.end(), v.begin())) return d;
  return v.size();
}

// Longest common prefix over pairs of distinct closure elements, plus the
// self-overlap |r| - period of proper powers.
inline Rational brute_lambda(Presentation const& p) {
  auto cl = brute_closure(p);
  Rational best(0);
  for (auto const& a : cl) {
    for (auto const& b : cl) {
      if (a == b) continue;
      std::size_t k = 0;
      while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
      best = std::max(best, Rational(static_cast<long long>(k), static_cast<long long>(a.size())));
    }
    std::size_t per = smallest_period(a);
    if (per < a.size())
      best = std::max(best, Rational(static_cast<long long>(a.size() - per), static_cast<long long>(a.size())));
  }
  return best;
}

// All words of length <= n over the given rank (reduced), built recursively.
inline std::vector<Word> all_words_up_to(std::size_t rank, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::vector<std::vector<Letter>> frontier{{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::vector<Letter>> next;
    for (auto const& f : frontier)
      for (std::uint16_t c = 0; c < 2 * rank; ++c) {
        if (!f.empty() && f.back().code == (c ^ 1)) continue;
        auto g = f;
        g.push_back(Letter{c});
        out.push_back(from_reduced(g));
        next.push_back(std::move(g));
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace cgt::testing
