#include "cgt/fibre.hpp"

#include <algorithm>

namespace cgt {

namespace {

Presentation quotient_presentation(Presentation const& g, std::vector<std::size_t> const& a) {
  std::vector<Word> rels = g.relators();
  for (auto x : a) rels.push_back(Word{Letter::make(x)});
  std::string name = g.name().empty() ? std::string{} : g.name() + "/N";
  return Presentation(g.alphabet(), rels, name);
}

}  // namespace

FibreSystem::FibreSystem(Presentation g, std::vector<std::size_t> a, BallOptions ball)
    : g_(std::move(g)), a_(std::move(a)), qbar_solver_(Presentation{}), q_solver_(Presentation{}) {
  std::sort(a_.begin(), a_.end());
  a_.erase(std::unique(a_.begin(), a_.end()), a_.end());
  for (auto x : a_)
    if (x >= g_.rank()) throw Error("generator index outside G");
  q_ = quotient_presentation(g_, a_);
  gg_ = direct_product_presentation(g_, g_);
  for (auto x : a_) p_gens_.add("(" + g_.alphabet().name(x) + ",1)");
  for (auto const& n : g_.alphabet().names()) p_gens_.add("(" + n + "," + n + ")");

  g_oracle_ = make_oracle(g_, ball);
  auto deletion = delete_generators(q_, a_);
  auto inner = make_oracle(deletion.result, ball);
  q_oracle_ = std::make_shared<MappedOracle>(
      q_.alphabet(), inner, [deletion](Word const& w) { return deletion.map(w); }, "tietze");
  Alphabet second;
  for (std::size_t i = g_.rank(); i < gg_.rank(); ++i) second.add(gg_.alphabet().name(i));
  gg_oracle_ = product_oracle(g_oracle_, renamed_oracle(g_oracle_, std::move(second)));
  q_solver_ = AreaSolver(q_);

  to_kept_.assign(g_.rank(), -1);
  Alphabet kept_names;
  for (std::size_t x = 0; x < g_.rank(); ++x) {
    if (a_index_of(x)) continue;
    to_kept_[x] = static_cast<long>(kept_.size());
    kept_.push_back(x);
    kept_names.add(g_.alphabet().name(x));
  }
  std::vector<Word> tbars, rels;
  std::vector<Word> es;
  for (auto const& t : g_.relators()) {
    auto sp = split_a(t);
    tbars.push_back(sp.stripped);
    es.push_back(invert(sp.p_word));
    rels.push_back(to_qbar(sp.stripped));
  }
  qbar_ = Presentation::dropping_trivial(kept_names, rels, q_.name());
  for (auto const& r : qbar_.relators()) {
    bool matched = false;
    for (std::size_t i = 0; i < rels.size() && !matched; ++i) {
      auto cr = cyclic_reduce(rels[i]);
      if (cr.core != r) continue;
      lifts_.push_back({from_qbar(cr.prefix), es[i]});
      matched = true;
    }
    if (!matched) throw Error("internal: Tietze relator not traced");
  }
  for (std::size_t i = 0; i < qbar_.relators().size(); ++i)
    for (bool inv : {false, true}) {
      Word r = inv ? invert(qbar_.relators()[i]) : qbar_.relators()[i];
      for (std::size_t k = 0; k < r.size(); ++k) closure_index_.emplace(rotate(r, k), std::make_tuple(i, inv, k));
    }
  qbar_solver_ = AreaSolver(qbar_);
}

Word FibreSystem::to_qbar(Word const& w) const {
  std::vector<Letter> out;
  for (auto l : w) {
    if (to_kept_[l.gen()] < 0) throw Error("internal: letter of A in a Qbar word");
    out.push_back(Letter::make(static_cast<std::size_t>(to_kept_[l.gen()]), l.inverted()));
  }
  return reduce(out);
}

Word FibreSystem::from_qbar(Word const& w) const {
  std::vector<Letter> out;
  for (auto l : w) out.push_back(Letter::make(kept_[l.gen()], l.inverted()));
  return reduce(out);
}

FibreSystem::Split FibreSystem::split_a(Word const& w) const {
  std::vector<Letter> stripped;
  std::vector<std::size_t> a_pos;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (a_index_of(w[i].gen()))
      a_pos.push_back(i);
    else
      stripped.push_back(w[i]);
  }
  Split out;
  out.stripped = reduce(stripped);
  std::vector<Word> parts;
  for (auto i : a_pos) {
    std::vector<Letter> v;
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (!a_index_of(w[j].gen())) v.push_back(w[j]);
    Word dv = diagonal(reduce(v));
    Word letter{Letter::make(*a_index_of(w[i].gen()), w[i].inverted())};
    parts.push_back(concat({invert(dv), letter, dv}));
  }
  Word pw;
  for (auto const& part : parts) pw = pw * part;
  out.p_word = std::move(pw);
  return out;
}

std::optional<Word> FibreSystem::kernel_p_word(Word const& n, AreaCaps caps, AreaResult* area) const {
  auto sp = split_a(n);
  Word s = to_qbar(sp.stripped);
  AreaResult res;
  if (s.empty()) {
    res.status = AreaResult::Status::Exact;
    res.certificate = AreaDecomposition{};
  } else {
    res = qbar_solver_.solve(s, caps);
  }
  if (area) *area = res;
  if (!res.found()) return std::nullopt;
  Word pw;
  for (auto const& f : res.certificate->factors) {
    auto it = closure_index_.find(f.rho);
    if (it == closure_index_.end()) throw Error("internal: factor outside the Qbar closure");
    auto [i, inv, k] = it->second;
    Word r = inv ? invert(qbar_.relators()[i]) : qbar_.relators()[i];
    Word c = lifts_[i].prefix * from_qbar(r.subword(0, k)) * from_qbar(f.theta);
    Word dc = diagonal(c);
    Word e = inv ? invert(lifts_[i].e) : lifts_[i].e;
    pw = pw * concat({invert(dc), e, dc});
  }
  return pw * sp.p_word;
}

std::optional<std::size_t> FibreSystem::a_index_of(std::size_t gen) const {
  auto it = std::lower_bound(a_.begin(), a_.end(), gen);
  if (it == a_.end() || *it != gen) return std::nullopt;
  return static_cast<std::size_t>(it - a_.begin());
}

Word FibreSystem::transcribe(Word const& p_word) const {
  std::vector<Letter> raw;
  std::size_t na = a_.size(), rank = g_.rank();
  for (auto l : p_word) {
    if (l.gen() < na) {
      raw.push_back(Letter::make(a_[l.gen()], l.inverted()));
    } else {
      std::size_t x = l.gen() - na;
      raw.push_back(Letter::make(x, l.inverted()));
      raw.push_back(Letter::make(rank + x, l.inverted()));
    }
  }
  return reduce(raw);
}

std::pair<Word, Word> FibreSystem::coordinates(Word const& p_word) const {
  std::vector<Letter> first, second;
  std::size_t na = a_.size();
  for (auto l : p_word) {
    if (l.gen() < na) {
      first.push_back(Letter::make(a_[l.gen()], l.inverted()));
    } else {
      first.push_back(Letter::make(l.gen() - na, l.inverted()));
      second.push_back(Letter::make(l.gen() - na, l.inverted()));
    }
  }
  return {reduce(first), reduce(second)};
}

Word FibreSystem::embed(Word const& g1, Word const& g2) const {
  std::vector<Letter> raw(g1.begin(), g1.end());
  for (auto l : g2) raw.push_back(Letter::make(g_.rank() + l.gen(), l.inverted()));
  return reduce(raw);
}

Word FibreSystem::diagonal(Word const& g) const {
  std::vector<Letter> raw;
  for (auto l : g) raw.push_back(Letter::make(a_.size() + l.gen(), l.inverted()));
  return from_reduced(std::move(raw));
}

FibreSystem make_fibre_system(Presentation const& g, std::vector<std::string> const& a_names, BallOptions ball) {
  std::vector<std::size_t> a;
  for (auto const& n : a_names) {
    auto idx = g.alphabet().find(n);
    if (!idx) throw Error("unknown generator '" + n + "' in A");
    a.push_back(*idx);
  }
  return FibreSystem(g, std::move(a), ball);
}

Verdict p_membership(Word const& g1, Word const& g2, FibreSystem const& sys) {
  return sys.q_oracle()->query(invert(g2) * g1);
}

// ---- P-ball -------------------------------------------------------------

std::vector<long long> PBall::key(Word const& g1, Word const& g2) const {
  std::vector<long long> k;
  if (free_) {
    for (auto l : g1) k.push_back(l.code);
    k.push_back(-1);
    for (auto l : g2) k.push_back(l.code);
    return k;
  }
  std::size_t rank = sys_->G().rank();
  k = lattice_->canonical(exponent_sums(g1, rank));
  auto k2 = lattice_->canonical(exponent_sums(g2, rank));
  k.insert(k.end(), k2.begin(), k2.end());
  return k;
}

PBall::Entry const* PBall::find(Word const& g1, Word const& g2) const {
  auto it = buckets_.find(key(g1, g2));
  if (it == buckets_.end()) return nullptr;
  if (free_) return &entries_[it->second.front()];
  auto const& o = *sys_->g_oracle();
  for (auto idx : it->second) {
    auto const& e = entries_[idx];
    if (o.equal(g1, e.g1) == Verdict::Trivial && o.equal(g2, e.g2) == Verdict::Trivial) return &e;
  }
  return nullptr;
}

PBall PBall::build(FibreSystem const& sys, std::size_t radius, std::size_t max_elements) {
  PBall b;
  b.sys_ = &sys;
  b.radius_ = radius;
  b.free_ = sys.g_oracle()->kind() == "free";
  if (!b.free_) b.lattice_.emplace(sys.G());
  b.entries_.push_back({Word{}, Word{}, Word{}, 0});
  b.buckets_[b.key(Word{}, Word{})].push_back(0);
  auto const& o = *sys.g_oracle();
  std::size_t codes = 2 * sys.p_gens().size();
  std::size_t begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    std::size_t end = b.entries_.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t c = 0; c < codes; ++c) {
        Letter l{static_cast<std::uint16_t>(c)};
        Word const& pw = b.entries_[i].p_word;
        if (!pw.empty() && pw.back() == l.inverse()) continue;
        Word next = pw * Word{l};
        auto [g1, g2] = sys.coordinates(next);
        auto k = b.key(g1, g2);
        auto& bucket = b.buckets_[k];
        bool dup = false;
        if (b.free_) {
          dup = !bucket.empty();
        } else {
          for (auto idx : bucket) {
            Verdict v1 = o.equal(g1, b.entries_[idx].g1);
            Verdict v2 = v1 == Verdict::Nontrivial ? v1 : o.equal(g2, b.entries_[idx].g2);
            if (v1 == Verdict::Trivial && v2 == Verdict::Trivial) {
              dup = true;
              break;
            }
            if (v1 == Verdict::Unknown || v2 == Verdict::Unknown) b.complete_ = false;
          }
        }
        if (dup) continue;
        if (b.entries_.size() >= max_elements) {
          b.complete_ = false;
          b.radius_ = r;
          return b;
        }
        bucket.push_back(b.entries_.size());
        b.entries_.push_back({std::move(next), std::move(g1), std::move(g2), r + 1});
      }
    }
    begin = end;
  }
  return b;
}

std::optional<std::size_t> p_length(Word const& g1, Word const& g2, FibreSystem const& sys, PBall const& ball) {
  if (p_membership(g1, g2, sys) == Verdict::Nontrivial) throw Error("pair is not in the fibre product");
  auto const* e = ball.find(g1, g2);
  if (!e) return std::nullopt;
  return e->length;
}

std::optional<std::size_t> p_length(Word const& g1, Word const& g2, FibreSystem const& sys, std::size_t radius_cap) {
  if (p_membership(g1, g2, sys) == Verdict::Nontrivial) throw Error("pair is not in the fibre product");
  return p_length(g1, g2, sys, PBall::build(sys, radius_cap));
}

// ---- lifting ------------------------------------------------------------

LiftResult lift_area_certificate(Word const& w, AreaDecomposition const& d, FibreSystem const& sys) {
  if (!verify_decomposition(w, d, sys.q_solver().closure())) throw Error("certificate invalid for the word over Q");
  LiftResult out;
  out.area_before = d.area();
  std::vector<AreaFactor> kept;
  Word pw;
  for (auto const& f : d.factors) {
    if (f.rho.size() != 1) continue;
    auto ai = sys.a_index_of(f.rho.front().gen());
    if (!ai) continue;
    kept.push_back(f);
    Word letter{Letter::make(*ai, f.rho.front().inverted())};
    Word dt = sys.diagonal(f.theta);
    pw = concat({pw, invert(dt), letter, dt});
  }
  out.area_after = kept.size();
  out.noise_after = decomposition_noise(kept);
  out.p_word = std::move(pw);
  std::size_t L = sys.q_max_relator_length();
  out.bound = (L + 1) * out.area_before + w.size();
  out.within_bound = out.p_word.size() <= out.bound && out.p_word.size() <= out.noise_after + out.area_after;
  out.verified = sys.gg_oracle()->equal(sys.transcribe(out.p_word), sys.embed(w, Word{}));
  return out;
}

std::optional<PairLift> lift_pair(Word const& g1, Word const& g2, FibreSystem const& sys, AreaCaps caps) {
  PairLift out;
  auto w = sys.kernel_p_word(invert(g2) * g1, caps, &out.area);
  if (!w) return std::nullopt;
  out.p_word = sys.diagonal(g2) * *w;
  return out;
}

// ---- distortion ---------------------------------------------------------

Sample distortion(FibreSystem const& sys, long long n, DistortionCaps caps) {
  Sample s;
  s.n = n;
  if (n <= 0) return s;
  auto gball = BallIndex::build(sys.g_oracle(), static_cast<std::size_t>(n));
  auto pball = PBall::build(sys, caps.p_radius, caps.max_elements);
  if (!gball.complete() || !pball.complete()) s.exactness = Exactness::LowerBound;
  auto const& G = sys.G();
  for (auto const& e1 : gball.elements()) {
    for (auto const& e2 : gball.elements()) {
      if (static_cast<long long>(e1.length + e2.length) > n) continue;
      Verdict m = p_membership(e1.rep, e2.rep, sys);
      if (m == Verdict::Unknown) s.exactness = weaker(s.exactness, Exactness::LowerBound);
      if (m != Verdict::Trivial) continue;
      auto const* pe = pball.find(e1.rep, e2.rep);
      long long v;
      if (pe) {
        v = static_cast<long long>(pe->length);
      } else {
        v = static_cast<long long>(pball.radius()) + 1;
        s.exactness = weaker(s.exactness, Exactness::LowerBound);
      }
      if (v > s.value || s.witness.empty()) {
        s.value = std::max(s.value, v);
        s.witness = "(" + G.format(e1.rep) + ", " + G.format(e2.rep) + ")";
      }
    }
  }
  return s;
}

DistortionWitness hard_distortion_witness(FibreSystem const& sys, long long n, DistortionCaps caps,
                                          std::function<bool(Word const&)> const& keep) {
  DistortionWitness best;
  best.p_len = 0;
  if (n <= 0) return best;
  auto gball = BallIndex::build(sys.g_oracle(), static_cast<std::size_t>(n));
  auto pball = PBall::build(sys, caps.p_radius, caps.max_elements);
  if (!gball.complete() || !pball.complete()) best.exactness = Exactness::LowerBound;
  for (auto const& e : gball.elements()) {
    Verdict m = p_membership(e.rep, Word{}, sys);
    if (m == Verdict::Unknown) best.exactness = weaker(best.exactness, Exactness::LowerBound);
    if (m != Verdict::Trivial) continue;
    if (keep && !keep(e.rep)) continue;
    auto const* pe = pball.find(e.rep, Word{});
    if (!pe) {
      best.exactness = weaker(best.exactness, Exactness::LowerBound);
      if (best.p_len) {
        best.gamma = e.rep;
        best.p_len.reset();
      }
      continue;
    }
    if (best.p_len && pe->length > *best.p_len) {
      best.gamma = e.rep;
      best.p_len = pe->length;
    }
  }
  return best;
}

}  // namespace cgt
