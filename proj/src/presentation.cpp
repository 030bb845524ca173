#include "cgt/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace cgt {

namespace {

std::vector<Word> normalize(std::vector<Word> const& relators, bool drop_trivial) {
  std::vector<Word> out;
  std::unordered_set<Word> seen;
  for (auto const& r : relators) {
    Word core = cyclic_reduce(r).core;
    if (core.empty()) {
      if (drop_trivial) continue;
      throw Error("relator is trivial after reduction");
    }
    if (seen.insert(core).second) out.push_back(std::move(core));
  }
  return out;
}

std::size_t longest(std::vector<Word> const& ws) {
  std::size_t m = 0;
  for (auto const& w : ws) m = std::max(m, w.size());
  return m;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t lcp(std::span<const Letter> a, std::span<const Letter> b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t k = 0;
  while (k < n && a[k] == b[k]) ++k;
  return k;
}

// Smallest period d dividing |w| with w = u^(|w|/d).
std::size_t primitive_period(Word const& w) {
  std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return d;
  }
  return n;
}

}  // namespace

Presentation::Presentation(Alphabet generators, std::vector<Word> const& relators, std::string name)
    : alphabet_(std::move(generators)), relators_(normalize(relators, false)), name_(std::move(name)) {
  max_len_ = longest(relators_);
  for (auto const& r : relators_)
    for (auto l : r)
      if (l.gen() >= alphabet_.size()) throw Error("relator uses a generator outside the alphabet");
}

Presentation Presentation::dropping_trivial(Alphabet generators, std::vector<Word> const& relators,
                                            std::string name) {
  return Presentation(std::move(generators), normalize(relators, true), std::move(name));
}

Presentation parse_presentation(std::string_view text) {
  std::optional<Alphabet> gens;
  std::vector<std::pair<std::string_view, std::pair<std::size_t, std::size_t>>> rel_lines;
  std::string name;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    std::size_t line_start = pos;
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) {
      if (eol == text.size()) break;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'gens:', 'rel:' or 'name:'", line_no, 1);
    auto key = trim(line.substr(0, colon));
    auto body = line.substr(colon + 1);
    std::size_t body_col = colon + 1;
    if (key == "gens") {
      if (gens) throw ParseError("duplicate 'gens:' line", line_no, 1);
      gens.emplace();
      std::istringstream is{std::string(body)};
      std::string tok;
      while (is >> tok) {
        try {
          gens->add(tok);
        } catch (Error const& e) {
          auto c = body.find(tok);
          throw ParseError(e.what(), line_no, body_col + c + 1);
        }
      }
    } else if (key == "rel") {
      rel_lines.push_back({body, {line_no, body_col}});
    } else if (key == "name") {
      name = std::string(trim(body));
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
    }
    (void)line_start;
    if (eol == text.size()) break;
  }
  if (!gens) throw ParseError("missing 'gens:' line", line_no, 1);
  std::vector<Word> rels;
  for (auto const& [body, where] : rel_lines) {
    Word w = parse_word(body, *gens, where.first, where.second);
    if (cyclic_reduce(w).core.empty()) throw ParseError("relator is trivial after reduction", where.first, where.second + 1);
    rels.push_back(std::move(w));
  }
  return Presentation(std::move(*gens), rels, std::move(name));
}

std::string serialize_presentation(Presentation const& p) {
  std::ostringstream os;
  if (!p.name().empty()) os << "name: " << p.name() << '\n';
  os << "gens:";
  for (auto const& n : p.alphabet().names()) os << ' ' << n;
  os << '\n';
  for (auto const& r : p.relators()) os << "rel: " << p.format(r) << '\n';
  return os.str();
}

Presentation load_presentation(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open presentation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

void save_presentation(Presentation const& p, std::string const& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize_presentation(p);
}

SymmetrizedClosure::SymmetrizedClosure(Presentation const& p) { build(p.relators()); }

SymmetrizedClosure::SymmetrizedClosure(std::span<const Word> words) { build(words); }

void SymmetrizedClosure::build(std::span<const Word> words) {
  std::size_t max_code = 0;
  for (auto const& r : words) {
    Word core = cyclic_reduce(r).core;
    for (auto const& s : {core, invert(core)})
      for (std::size_t k = 0; k < s.size(); ++k) elements_.push_back(rotate(s, k));
    for (auto l : core) max_code = std::max<std::size_t>(max_code, (l.code | 1u) + 1);
  }
  std::sort(elements_.begin(), elements_.end(),
            [](Word const& a, Word const& b) {
              return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
            });
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  bucket_begin_.assign(max_code + 1, 0);
  std::size_t i = 0;
  for (std::size_t code = 0; code <= max_code; ++code) {
    while (i < elements_.size() && elements_[i].front().code < code) ++i;
    bucket_begin_[code] = i;
  }
}

bool SymmetrizedClosure::contains(Word const& w) const {
  return std::binary_search(elements_.begin(), elements_.end(), w, [](Word const& a, Word const& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
}

std::span<const Word> SymmetrizedClosure::starting_with(Letter l) const {
  if (static_cast<std::size_t>(l.code) + 1 >= bucket_begin_.size()) return {};
  return std::span<const Word>(elements_).subspan(bucket_begin_[l.code],
                                                  bucket_begin_[l.code + 1] - bucket_begin_[l.code]);
}

bool SymmetrizedClosure::for_each_prefix_match(std::span<const Letter> text, std::size_t min_len,
                                               std::function<bool(Word const&, std::size_t)> const& fn) const {
  if (text.empty()) return false;
  min_len = std::max<std::size_t>(min_len, 1);
  auto bucket = starting_with(text.front());
  if (bucket.empty()) return false;
  // Sorted order: common-prefix length with `text` is unimodal around the
  // insertion point, so walk outward while it stays >= min_len.
  auto it = std::lower_bound(bucket.begin(), bucket.end(), text, [](Word const& a, std::span<const Letter> t) {
    return std::lexicographical_compare(a.begin(), a.end(), t.begin(), t.end());
  });
  auto idx = static_cast<std::ptrdiff_t>(it - bucket.begin());
  for (auto j = idx; j < static_cast<std::ptrdiff_t>(bucket.size()); ++j) {
    std::size_t k = lcp(bucket[j].letters(), text);
    if (k < min_len) break;
    if (fn(bucket[j], k)) return true;
  }
  for (auto j = idx - 1; j >= 0; --j) {
    std::size_t k = lcp(bucket[j].letters(), text);
    if (k < min_len) break;
    if (fn(bucket[j], k)) return true;
  }
  return false;
}

PieceReport small_cancellation_report(Presentation const& p) {
  if (p.relators().empty()) throw Error("small cancellation constant needs at least one relator");
  SymmetrizedClosure closure(p);
  auto const& el = closure.elements();
  PieceReport best;
  auto consider = [&](Word const& r, std::size_t piece_len) {
    Rational v(static_cast<long long>(piece_len), static_cast<long long>(r.size()));
    if (v > best.lambda) {
      best.lambda = v;
      best.piece = r.subword(0, piece_len);
      best.relator = r;
    }
  };
  for (std::size_t i = 0; i < el.size(); ++i) {
    std::size_t k = 0;
    if (i > 0) k = std::max(k, lcp(el[i].letters(), el[i - 1].letters()));
    if (i + 1 < el.size()) k = std::max(k, lcp(el[i].letters(), el[i + 1].letters()));
    std::size_t period = primitive_period(el[i]);
    if (period < el[i].size()) k = std::max(k, el[i].size() - period);
    consider(el[i], k);
  }
  return best;
}

Rational small_cancellation_lambda(Presentation const& p) { return small_cancellation_report(p).lambda; }

bool is_c_prime_sixth(Presentation const& p) {
  return !p.relators().empty() && small_cancellation_lambda(p) < Rational(1, 6);
}

Word commutator(Word const& a, Word const& b) { return concat({a, b, invert(a), invert(b)}); }

Word relabel(Word const& w, std::span<const std::size_t> map) {
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (auto l : w) raw.push_back(Letter::make(map[l.gen()], l.inverted()));
  return reduce(raw);
}

Presentation direct_product_presentation(Presentation const& p1, Presentation const& p2) {
  Alphabet gens = p1.alphabet();
  std::vector<std::size_t> map2;
  for (auto const& n : p2.alphabet().names()) {
    std::string candidate = n;
    while (gens.find(candidate)) candidate += "_2";
    map2.push_back(gens.add(candidate));
  }
  std::vector<Word> rels = p1.relators();
  for (auto const& r : p2.relators()) rels.push_back(relabel(r, map2));
  for (std::size_t i = 0; i < p1.rank(); ++i)
    for (std::size_t j = 0; j < p2.rank(); ++j)
      rels.push_back(commutator(Word{Letter::make(i)}, Word{Letter::make(map2[j])}));
  std::string name;
  if (!p1.name().empty() || !p2.name().empty()) name = p1.name() + " x " + p2.name();
  return Presentation(std::move(gens), rels, std::move(name));
}

Word GeneratorDeletion::map(Word const& w) const {
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (auto l : w) {
    long g = index_map.at(l.gen());
    if (g >= 0) raw.push_back(Letter::make(static_cast<std::size_t>(g), l.inverted()));
  }
  return reduce(raw);
}

GeneratorDeletion delete_generators(Presentation const& p, std::vector<std::size_t> const& killed) {
  GeneratorDeletion d;
  d.index_map.assign(p.rank(), 0);
  for (auto k : killed) d.index_map.at(k) = -1;
  Alphabet gens;
  for (std::size_t g = 0; g < p.rank(); ++g)
    if (d.index_map[g] >= 0) d.index_map[g] = static_cast<long>(gens.add(p.alphabet().name(g)));
  std::vector<Word> rels;
  for (auto const& r : p.relators()) rels.push_back(d.map(r));
  d.result = Presentation::dropping_trivial(std::move(gens), rels, p.name());
  return d;
}

}  // namespace cgt
