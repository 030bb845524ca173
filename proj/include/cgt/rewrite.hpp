#pragma once

#include "cgt/presentation.hpp"

namespace cgt {

// One relator application u = A s B -> A t B with s t^-1 = r a closure
// element, s = r[0..k) matched at `pos`. With k = 0 this inserts r^-1.
struct Move {
  std::size_t pos = 0;
  std::size_t matched = 0;
  Word const* element = nullptr;
};

// reduce(A t B) for the move.
Word apply_move(Word const& u, Move const& m);

// The factor contributed by the move: u = result * theta^-1 rho theta with
// theta = B and rho = t^-1 s, a rotation of r.
std::pair<Word, Word> move_factor(Word const& u, Move const& m);

// Enumerates maximal-match moves at every position (0 .. |u|). fn returns
// true to stop; returns whether it stopped.
template <class Fn>
bool for_each_move(Word const& u, SymmetrizedClosure const& closure, Fn&& fn) {
  auto text = u.letters();
  for (std::size_t pos = 0; pos <= u.size(); ++pos) {
    auto rest = text.subspan(pos);
    for (auto const& r : closure.elements()) {
      std::size_t k = 0;
      std::size_t n = std::min(r.size(), rest.size());
      while (k < n && r[k] == rest[k]) ++k;
      if (fn(Move{pos, k, &r})) return true;
    }
  }
  return false;
}

}  // namespace cgt
