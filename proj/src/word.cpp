#include "cgt/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace cgt {

ParseError::ParseError(std::string const& msg, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

void push_reducing(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == l.inverse()) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

Word::Word(std::span<const Letter> raw) {
  letters_.reserve(raw.size());
  for (auto l : raw) push_reducing(letters_, l);
}

Word::Word(std::initializer_list<Letter> raw) : Word(std::span<const Letter>(raw.begin(), raw.size())) {}

Word Word::subword(std::size_t pos, std::size_t len) const {
  return Word(Unchecked{}, std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + len));
}

bool shortlex_less(Word const& a, Word const& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.letters_ < b.letters_;
}

Word from_reduced(std::vector<Letter> letters) { return Word(Word::Unchecked{}, std::move(letters)); }

Word reduce(std::span<const Letter> raw) { return Word(raw); }

Word invert(Word const& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverse());
  return from_reduced(std::move(out));
}

Word concat(Word const& a, Word const& b) {
  std::vector<Letter> out(a.begin(), a.end());
  out.reserve(a.size() + b.size());
  for (auto l : b) push_reducing(out, l);
  return from_reduced(std::move(out));
}

Word concat(std::initializer_list<Word> parts) {
  std::vector<Letter> out;
  for (auto const& p : parts)
    for (auto l : p) push_reducing(out, l);
  return from_reduced(std::move(out));
}

Word operator*(Word const& a, Word const& b) { return concat(a, b); }

Word conjugate(Word const& w, Word const& x) { return concat({invert(x), w, x}); }

Word power(Word const& w, long long p) {
  if (p == 0 || w.empty()) return {};
  Word base = p > 0 ? w : invert(w);
  auto n = static_cast<unsigned long long>(p > 0 ? p : -p);
  // u = x c x^-1 with c cyclically reduced, so u^n = x c^n x^-1 exactly.
  auto [core, prefix] = cyclic_reduce(base);
  std::vector<Letter> out(prefix.begin(), prefix.end());
  out.reserve(prefix.size() * 2 + core.size() * n);
  for (unsigned long long i = 0; i < n; ++i) out.insert(out.end(), core.begin(), core.end());
  auto pinv = invert(prefix);
  out.insert(out.end(), pinv.begin(), pinv.end());
  return from_reduced(std::move(out));
}

CyclicReduction cyclic_reduce(Word const& u) {
  std::size_t k = 0;
  std::size_t const n = u.size();
  while (2 * k + 1 < n && u[k] == u[n - 1 - k].inverse()) ++k;
  return {u.subword(k, n - 2 * k), u.subword(0, k)};
}

bool is_cyclically_reduced(Word const& w) { return w.size() < 2 || w.front() != w.back().inverse(); }

Word rotate(Word const& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  std::vector<Letter> out(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return from_reduced(std::move(out));
}

std::vector<long long> exponent_sums(Word const& w, std::size_t rank) {
  std::vector<long long> v(rank, 0);
  for (auto l : w) v.at(l.gen()) += l.sign();
  return v;
}

Alphabet::Alphabet(std::vector<std::string> names) {
  for (auto& n : names) add(std::move(n));
}

std::optional<std::size_t> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Alphabet::valid_name(std::string_view name) {
  if (name.empty() || name == "1") return false;
  if (std::isdigit(static_cast<unsigned char>(name.front())) || name.front() == '-') return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '^' || c == '#';
  });
}

std::size_t Alphabet::add(std::string name) {
  if (!valid_name(name)) throw Error("invalid generator name '" + name + "'");
  if (index_.contains(name)) throw Error("duplicate generator name '" + name + "'");
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

Word parse_word(std::string_view text, Alphabet const& alphabet, std::size_t line, std::size_t column_offset) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  auto col = [&](std::size_t pos) { return column_offset + pos + 1; };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view tok = text.substr(start, i - start);
    std::string_view name = tok;
    long long exp = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      name = tok.substr(0, caret);
      auto digits = tok.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exp);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
        throw ParseError("malformed exponent in '" + std::string(tok) + "'", line, col(start + caret + 1));
      if (exp == 0) throw ParseError("zero exponent in '" + std::string(tok) + "'", line, col(start + caret + 1));
    }
    if (name == "1") continue;
    auto gen = alphabet.find(name);
    if (!gen) throw ParseError("unknown generator '" + std::string(name) + "'", line, col(start));
    Letter l = Letter::make(*gen, exp < 0);
    for (long long k = 0; k < (exp < 0 ? -exp : exp); ++k) raw.push_back(l);
  }
  return reduce(raw);
}

std::string format_word(Word const& w, Alphabet const& alphabet) {
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long long run = static_cast<long long>(j - i) * w[i].sign();
    if (!first) os << ' ';
    first = false;
    os << alphabet.name(w[i].gen());
    if (run != 1) os << '^' << run;
    i = j;
  }
  return os.str();
}

}  // namespace cgt
