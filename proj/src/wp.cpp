#include "cgt/wp.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

#include "cgt/rewrite.hpp"

namespace cgt {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "trivial";
    case Verdict::Nontrivial: return "nontrivial";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

Verdict WordProblemOracle::query(Word const& w) const {
  ++queries_;
  Verdict v = w.empty() ? Verdict::Trivial : decide(w);
  switch (v) {
    case Verdict::Trivial: ++trivial_; break;
    case Verdict::Nontrivial: ++nontrivial_; break;
    case Verdict::Unknown: ++unknown_; break;
  }
  return v;
}

void WordProblemOracle::observe_iso(std::size_t moves, std::size_t length) const {
  if (length == 0) return;
  double r = static_cast<double>(moves) / static_cast<double>(length);
  double cur = iso_.load();
  while (r > cur && !iso_.compare_exchange_weak(cur, r)) {
  }
}

OracleStats WordProblemOracle::stats() const {
  OracleStats s;
  s.queries = queries_.load();
  s.trivial = trivial_.load();
  s.nontrivial = nontrivial_.load();
  s.unknown = unknown_.load();
  s.nodes = nodes_.load();
  s.iso_constant = iso_.load();
  return s;
}

// ---- Dehn ---------------------------------------------------------------

DehnReducer::DehnReducer(Presentation const& p) : presentation_(p), closure_(p) {
  if (p.relators().empty()) throw Error("not C'(1/6): presentation has no relators");
  lambda_ = small_cancellation_lambda(p);
  if (!(lambda_ < Rational(1, 6))) throw Error("not C'(1/6): lambda = " + std::to_string(lambda_.numerator()) + "/" +
                                               std::to_string(lambda_.denominator()));
  min_half_ = std::numeric_limits<std::size_t>::max();
  for (auto const& r : p.relators()) {
    min_half_ = std::min(min_half_, r.size() / 2 + 1);
    max_len_ = std::max(max_len_, r.size());
  }
}

DehnResult DehnReducer::reduce(Word const& w) const {
  DehnResult out{w, 0};
  std::size_t start = 0;
  for (;;) {
    Word const& u = out.word;
    std::optional<Move> found;
    for (std::size_t i = start; i < u.size() && !found; ++i) {
      closure_.for_each_prefix_match(u.letters().subspan(i), min_half_, [&](Word const& r, std::size_t k) {
        if (2 * k > r.size()) {
          found = Move{i, k, &r};
          return true;
        }
        return false;
      });
    }
    if (!found) return out;
    std::size_t pos = found->pos;
    out.word = apply_move(u, *found);
    ++out.steps;
    start = pos > max_len_ ? pos - max_len_ : 0;
  }
}

Word dehn_reduce(Presentation const& p, Word const& w) { return DehnReducer(p).reduce(w).word; }

// ---- simple oracles -----------------------------------------------------

Verdict FreeOracle::decide(Word const& w) const { return w.empty() ? Verdict::Trivial : Verdict::Nontrivial; }

bool is_syntactically_abelian(Presentation const& p) {
  std::size_t n = p.rank();
  if (n <= 1) return true;
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (auto const& r : p.relators()) {
    if (r.size() != 4) continue;
    // Any rotation of g h g^-1 h^-1 or its inverse.
    bool ok = r[0].gen() != r[1].gen() && r[2] == r[0].inverse() && r[3] == r[1].inverse();
    if (ok) pairs.insert(std::minmax(r[0].gen(), r[1].gen()));
  }
  return pairs.size() == n * (n - 1) / 2;
}

AbelianOracle::AbelianOracle(Presentation const& p) : WordProblemOracle(p.alphabet()), lattice_(p) {
  if (!is_syntactically_abelian(p)) throw Error("presentation is not syntactically abelian");
}

Verdict AbelianOracle::decide(Word const& w) const {
  return lattice_.contains(exponent_sums(w, rank())) ? Verdict::Trivial : Verdict::Nontrivial;
}

// ---- trivial HNN over free abelian base ---------------------------------

namespace {

bool is_commutator_of_letters(Word const& r) {
  return r.size() == 4 && r[0].gen() != r[1].gen() && r[2] == r[0].inverse() && r[3] == r[1].inverse();
}

std::optional<HnnStructure> try_base(Presentation const& p, std::vector<bool> const& in_base) {
  HnnStructure s;
  std::size_t n = p.rank();
  s.base_index.assign(n, -1);
  s.stable_index.assign(n, -1);
  std::size_t stable_count = 0;
  for (std::size_t g = 0; g < n; ++g) {
    if (in_base[g]) {
      s.base_index[g] = static_cast<long>(s.base_rank++);
    } else {
      s.stable_index[g] = static_cast<long>(stable_count++);
    }
  }
  std::vector<std::vector<std::vector<long long>>> rows(stable_count);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (auto const& r : p.relators()) {
    std::vector<std::size_t> stable_pos;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!in_base[r[i].gen()]) stable_pos.push_back(i);
    if (stable_pos.empty()) {
      if (!is_commutator_of_letters(r)) return std::nullopt;
      pairs.insert(std::minmax(r[0].gen(), r[1].gen()));
      continue;
    }
    if (stable_pos.size() != 2) return std::nullopt;
    Letter a = r[stable_pos[0]], b = r[stable_pos[1]];
    if (a.gen() != b.gen() || a != b.inverse()) return std::nullopt;
    // Rotate so the positive stable letter comes first: t alpha t^-1 beta.
    std::size_t at = a.inverted() ? stable_pos[1] : stable_pos[0];
    Word rot = rotate(r, at);
    std::size_t second = 0;
    for (std::size_t i = 1; i < rot.size(); ++i)
      if (rot[i].gen() == a.gen()) second = i;
    Word alpha = rot.subword(1, second - 1);
    Word beta = rot.subword(second + 1, rot.size() - second - 1);
    if (alpha.empty() || beta != invert(alpha)) return std::nullopt;
    std::vector<long long> v(s.base_rank, 0);
    for (auto l : alpha) v[static_cast<std::size_t>(s.base_index[l.gen()])] += l.sign();
    rows[static_cast<std::size_t>(s.stable_index[a.gen()])].push_back(std::move(v));
  }
  if (pairs.size() != s.base_rank * (s.base_rank - 1) / 2) return std::nullopt;
  for (auto& rs : rows) s.subgroups.emplace_back(s.base_rank, rs);
  return s;
}

}  // namespace

std::optional<HnnStructure> recognize_trivial_hnn(Presentation const& p) {
  std::size_t n = p.rank();
  if (n > 16) return std::nullopt;
  // Larger bases first.
  std::vector<std::uint32_t> masks(std::size_t{1} << n);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) > std::popcount(b);
  });
  for (auto m : masks) {
    std::vector<bool> in_base(n);
    for (std::size_t g = 0; g < n; ++g) in_base[g] = (m >> g) & 1u;
    if (auto s = try_base(p, in_base)) return s;
  }
  return std::nullopt;
}

BrittonOracle::BrittonOracle(Presentation const& p, HnnStructure s)
    : WordProblemOracle(p.alphabet()), hnn_(std::move(s)), lattice_(p) {}

Verdict BrittonOracle::decide(Word const& w) const {
  // Stack of syllables: base vectors separated by stable letters. A pinch
  // t^e h t^-e with h in H_t collapses to h.
  struct Frame {
    Letter stable;
    std::vector<long long> before;  // base segment preceding `stable`
  };
  std::vector<Frame> stack;
  std::vector<long long> cur(hnn_.base_rank, 0);
  for (auto l : w) {
    long b = hnn_.base_index[l.gen()];
    if (b >= 0) {
      cur[static_cast<std::size_t>(b)] += l.sign();
      continue;
    }
    auto const& h = hnn_.subgroups[static_cast<std::size_t>(hnn_.stable_index[l.gen()])];
    if (!stack.empty() && stack.back().stable == l.inverse() && h.contains(cur)) {
      for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += stack.back().before[i];
      stack.pop_back();
      continue;
    }
    stack.push_back({l, cur});
    std::fill(cur.begin(), cur.end(), 0);
  }
  if (!stack.empty()) return Verdict::Nontrivial;
  return std::all_of(cur.begin(), cur.end(), [](long long x) { return x == 0; }) ? Verdict::Trivial
                                                                                  : Verdict::Nontrivial;
}

DehnOracle::DehnOracle(Presentation const& p) : WordProblemOracle(p.alphabet()), reducer_(p), lattice_(p) {
  // C'(1/6) groups without proper-power relators are torsion-free.
  torsion_free_ = true;
  for (auto const& r : p.relators()) {
    std::size_t n = r.size();
    for (std::size_t d = 1; d < n && torsion_free_; ++d) {
      if (n % d) continue;
      bool periodic = true;
      for (std::size_t i = d; i < n && periodic; ++i) periodic = r[i] == r[i - d];
      if (periodic) torsion_free_ = false;
    }
  }
}

Verdict DehnOracle::decide(Word const& w) const {
  auto res = reducer_.reduce(w);
  add_nodes(res.steps);
  if (res.word.empty()) {
    observe_iso(res.steps, w.size());
    return Verdict::Trivial;
  }
  return Verdict::Nontrivial;
}

// ---- ball search --------------------------------------------------------

BallOracle::BallOracle(Presentation const& p, BallOptions opts)
    : WordProblemOracle(p.alphabet()), presentation_(p), closure_(p), lattice_(p), opts_(opts) {
  if (opts_.coset_cap > 0) cosets_ = CosetTable::enumerate(p, opts_.coset_cap);
}

Verdict BallOracle::decide(Word const& w) const {
  if (!lattice_.contains(exponent_sums(w, rank()))) return Verdict::Nontrivial;
  if (cosets_) return cosets_->is_identity(w) ? Verdict::Trivial : Verdict::Nontrivial;
  std::size_t radius = std::max(opts_.radius, w.size());
  std::unordered_set<Word> seen{w};
  std::vector<Word> layer{w};
  bool pruned = false;
  std::uint64_t nodes = 0;
  for (std::size_t depth = 0; depth < opts_.move_cap && !layer.empty(); ++depth) {
    std::vector<Word> next;
    for (auto const& u : layer) {
      bool hit = for_each_move(u, closure_, [&](Move const& m) {
        Word v = apply_move(u, m);
        ++nodes;
        if (v.empty()) return true;
        if (v.size() > radius) {
          pruned = true;
          return false;
        }
        if (seen.size() >= opts_.node_cap) {
          pruned = true;
          return false;
        }
        if (seen.insert(v).second) next.push_back(std::move(v));
        return false;
      });
      if (hit) {
        add_nodes(nodes);
        observe_iso(depth + 1, w.size());
        return Verdict::Trivial;
      }
    }
    layer = std::move(next);
  }
  add_nodes(nodes);
  if (!layer.empty()) pruned = true;
  return pruned ? Verdict::Unknown : Verdict::Nontrivial;
}

// ---- combinators --------------------------------------------------------

namespace {

Alphabet union_alphabet(Alphabet const& a, Alphabet const& b) {
  Alphabet out = a;
  for (auto const& n : b.names()) {
    if (out.find(n)) throw Error("alphabet clash on generator '" + n + "'");
    out.add(n);
  }
  return out;
}

}  // namespace

ProductOracle::ProductOracle(OraclePtr o1, OraclePtr o2)
    : WordProblemOracle(union_alphabet(o1->alphabet(), o2->alphabet())),
      first_(std::move(o1)),
      second_(std::move(o2)) {}

std::pair<Word, Word> ProductOracle::project(Word const& w) const {
  std::size_t n1 = first_->rank();
  std::vector<Letter> a, b;
  for (auto l : w) {
    if (l.gen() < n1) {
      a.push_back(l);
    } else {
      b.push_back(Letter::make(l.gen() - n1, l.inverted()));
    }
  }
  return {reduce(a), reduce(b)};
}

Verdict ProductOracle::decide(Word const& w) const {
  auto [a, b] = project(w);
  Verdict va = first_->query(a);
  if (va == Verdict::Nontrivial) return va;
  Verdict vb = second_->query(b);
  if (vb == Verdict::Nontrivial) return vb;
  return va == Verdict::Trivial && vb == Verdict::Trivial ? Verdict::Trivial : Verdict::Unknown;
}

MappedOracle::MappedOracle(Alphabet a, OraclePtr inner, std::function<Word(Word const&)> map, std::string label)
    : WordProblemOracle(std::move(a)), inner_(std::move(inner)), map_(std::move(map)), label_(std::move(label)) {}

Verdict MappedOracle::decide(Word const& w) const { return inner_->query(map_(w)); }

OraclePtr ball_oracle(Presentation const& p, std::size_t radius, std::size_t move_cap) {
  BallOptions o;
  o.radius = radius;
  o.move_cap = move_cap;
  return std::make_shared<BallOracle>(p, o);
}

OraclePtr product_oracle(OraclePtr o1, OraclePtr o2) {
  return std::make_shared<ProductOracle>(std::move(o1), std::move(o2));
}

OraclePtr renamed_oracle(OraclePtr o, Alphabet a) {
  if (a.size() != o->rank()) throw Error("renamed alphabet has the wrong size");
  return std::make_shared<MappedOracle>(std::move(a), std::move(o), [](Word const& w) { return w; }, "rename");
}

OraclePtr make_oracle(Presentation const& p, BallOptions opts) {
  if (p.relators().empty()) return std::make_shared<FreeOracle>(p.alphabet());
  if (is_syntactically_abelian(p)) return std::make_shared<AbelianOracle>(p);
  if (auto h = recognize_trivial_hnn(p)) return std::make_shared<BrittonOracle>(p, std::move(*h));
  if (is_c_prime_sixth(p)) return std::make_shared<DehnOracle>(p);
  return std::make_shared<BallOracle>(p, opts);
}

// ---- orders -------------------------------------------------------------

std::string to_string(Order const& o) {
  switch (o.kind) {
    case Order::Kind::Finite: return std::to_string(o.value);
    case Order::Kind::InfiniteUpToBound:
      return o.proven_infinite ? "infinite" : "infinite_up_to_" + std::to_string(o.value);
    case Order::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

Order order_of(Word const& w, WordProblemOracle const& oracle, long long cutoff) {
  Order out;
  if (w.empty()) {
    out.kind = Order::Kind::Finite;
    out.value = 1;
    return out;
  }
  bool proven = false;
  if (auto const* lat = oracle.abelianization()) proven = !lat->order(exponent_sums(w, oracle.rank())).has_value();
  if (!proven && oracle.is_torsion_free() && oracle.query(w) == Verdict::Nontrivial) proven = true;
  if (proven) {
    out.kind = Order::Kind::InfiniteUpToBound;
    out.value = cutoff;
    out.proven_infinite = true;
    return out;
  }
  for (long long k = 1; k <= cutoff; ++k) {
    Verdict v = oracle.query(power(w, k));
    if (v == Verdict::Unknown) return out;
    if (v == Verdict::Trivial) {
      out.kind = Order::Kind::Finite;
      out.value = k;
      return out;
    }
  }
  out.kind = Order::Kind::InfiniteUpToBound;
  out.value = cutoff;
  return out;
}

}  // namespace cgt
