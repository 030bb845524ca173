#include "cgt/rewrite.hpp"

namespace cgt {

Word apply_move(Word const& u, Move const& m) {
  Word const& r = *m.element;
  std::vector<Letter> raw(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m.pos));
  raw.reserve(u.size() + r.size());
  for (std::size_t i = r.size(); i > m.matched; --i) raw.push_back(r[i - 1].inverse());
  raw.insert(raw.end(), u.begin() + static_cast<std::ptrdiff_t>(m.pos + m.matched), u.end());
  return reduce(raw);
}

std::pair<Word, Word> move_factor(Word const& u, Move const& m) {
  Word theta = u.subword(m.pos + m.matched, u.size() - m.pos - m.matched);
  Word rho = rotate(*m.element, m.matched);
  return {std::move(theta), std::move(rho)};
}

}  // namespace cgt
