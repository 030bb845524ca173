#include "cgt/conjugacy.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace cgt {

namespace {

std::string show(Word const& w, Alphabet const& al) { return w.empty() ? "1" : format_word(w, al); }

Word min_rotation(Word const& w) {
  Word core = cyclic_reduce(w).core;
  Word best = core;
  for (std::size_t k = 1; k < core.size(); ++k) {
    Word r = rotate(core, k);
    if (shortlex_less(r, best)) best = std::move(r);
  }
  return best;
}

std::size_t pair_length(std::size_t a, std::size_t b, PairConvention c) {
  return c == PairConvention::Sum ? a + b : std::max(a, b);
}

// Pair search shared by the three flavors: items i, j are compared, values
// reduced by max with ties broken by the first pair in enumeration order.
struct PairOutcome {
  bool found = false;
  std::size_t length = 0;
  Word conjugator;
  bool uncertified = false;
};

struct ScanResult {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  std::size_t value = 0;
  Word conjugator;
  std::size_t pairs = 0, uncertified = 0;
};

template <class Fn>
ScanResult scan_pairs(std::vector<std::size_t> const& lengths, long long n, PairConvention conv, unsigned workers,
                      Fn&& fn) {
  std::size_t count = lengths.size();
  std::vector<ScanResult> per_i(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < count;) {
      ScanResult& b = per_i[i];
      for (std::size_t j = i; j < count; ++j) {
        if (static_cast<long long>(pair_length(lengths[i], lengths[j], conv)) > n) continue;
        PairOutcome o = fn(i, j);
        ++b.pairs;
        if (o.uncertified) ++b.uncertified;
        if (o.found && (!b.best || o.length > b.value)) {
          b.best = {i, j};
          b.value = o.length;
          b.conjugator = std::move(o.conjugator);
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, workers); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  ScanResult out;
  for (auto& b : per_i) {
    out.pairs += b.pairs;
    out.uncertified += b.uncertified;
    if (b.best && (!out.best || b.value > out.value)) {
      out.best = b.best;
      out.value = b.value;
      out.conjugator = b.conjugator;
    }
  }
  return out;
}

void record(ScanResult const& r, CLSample& out) {
  out.pairs = r.pairs;
  out.uncertified_pairs = r.uncertified;
  out.sample.value = static_cast<long long>(r.value);
  out.conjugator = r.conjugator;
  if (r.uncertified > 0) out.sample.exactness = weaker(out.sample.exactness, Exactness::LowerBound);
}

}  // namespace

std::string to_string(ConjugacySearch::Status s) {
  switch (s) {
    case ConjugacySearch::Status::Found: return "found";
    case ConjugacySearch::Status::NotFound: return "not_found";
    case ConjugacySearch::Status::Unknown: return "unknown";
  }
  return "?";
}

ConjugacySearch conjugacy_search(BallIndex const& ball, Word const& u, Word const& v) {
  ConjugacySearch out;
  if (u == v) {
    out.status = ConjugacySearch::Status::Found;
    return out;
  }
  auto const& o = *ball.oracle();
  if (auto const* lat = o.abelianization()) {
    if (lat->canonical(exponent_sums(u, o.rank())) != lat->canonical(exponent_sums(v, o.rank()))) {
      out.status = ConjugacySearch::Status::NotFound;
      return out;
    }
  }
  bool undecided = !ball.complete();
  for (auto const& e : ball.elements()) {
    Verdict r = o.equal(conjugate(u, e.rep), v);
    if (r == Verdict::Trivial) {
      out.status = ConjugacySearch::Status::Found;
      out.conjugator = e.rep;
      return out;
    }
    if (r == Verdict::Unknown) undecided = true;
  }
  out.status = undecided ? ConjugacySearch::Status::Unknown : ConjugacySearch::Status::NotFound;
  return out;
}

ConjugacySearch conjugacy_search(OraclePtr oracle, Word const& u, Word const& v, std::size_t radius) {
  return conjugacy_search(BallIndex::build(std::move(oracle), radius), u, v);
}

bool certified_non_conjugate(WordProblemOracle const& oracle, Word const& u, Word const& v,
                             BallIndex const* whole_group) {
  if (auto const* lat = oracle.abelianization()) {
    if (lat->canonical(exponent_sums(u, oracle.rank())) != lat->canonical(exponent_sums(v, oracle.rank())))
      return true;
  }
  if (oracle.kind() == "free") return min_rotation(u) != min_rotation(v);
  if (whole_group && whole_group->covers_group())
    return conjugacy_search(*whole_group, u, v).status == ConjugacySearch::Status::NotFound;
  return false;
}

PConjugacySearch p_conjugacy_search(PBall const& ball, Word const& u1, Word const& u2, Word const& v1,
                                    Word const& v2) {
  PConjugacySearch out;
  auto const& o = *ball.system().g_oracle();
  bool undecided = !ball.complete();
  for (auto const& e : ball.elements()) {
    Verdict a = o.equal(conjugate(u1, e.g1), v1);
    if (a == Verdict::Nontrivial) continue;
    Verdict b = o.equal(conjugate(u2, e.g2), v2);
    if (a == Verdict::Trivial && b == Verdict::Trivial) {
      out.status = ConjugacySearch::Status::Found;
      out.p_word = e.p_word;
      return out;
    }
    if (a == Verdict::Unknown || b == Verdict::Unknown) undecided = true;
  }
  out.status = undecided ? ConjugacySearch::Status::Unknown : ConjugacySearch::Status::NotFound;
  return out;
}

// ---- conjugator length tables -------------------------------------------

std::string to_string(CLFlavor f) {
  switch (f) {
    case CLFlavor::G: return "g";
    case CLFlavor::P: return "p";
    case CLFlavor::Rel: return "rel";
  }
  return "?";
}

CLFlavor parse_cl_flavor(std::string const& s) {
  if (s == "g") return CLFlavor::G;
  if (s == "p") return CLFlavor::P;
  if (s == "rel") return CLFlavor::Rel;
  throw Error("unknown conjugator-length flavor '" + s + "'");
}

CLSample cl_g(OraclePtr oracle, long long n, CLCaps caps) {
  CLSample out;
  out.flavor = CLFlavor::G;
  out.sample.n = n;
  if (n < 0) return out;
  std::size_t radius = std::max<std::size_t>(static_cast<std::size_t>(n), caps.conjugator_radius);
  auto ball = BallIndex::build(oracle, radius, caps.max_elements);
  if (!ball.complete()) out.sample.exactness = Exactness::LowerBound;
  auto const& o = *oracle;
  std::vector<BallIndex::Entry const*> items;
  std::vector<std::size_t> lengths;
  for (auto const& e : ball.elements()) {
    if (static_cast<long long>(e.length) > n) continue;
    items.push_back(&e);
    lengths.push_back(e.length);
  }
  BallIndex const* whole = ball.covers_group() ? &ball : nullptr;
  auto fn = [&](std::size_t i, std::size_t j) {
    PairOutcome r;
    if (i == j) {
      r.found = true;
      return r;
    }
    Word const& u = items[i]->rep;
    Word const& v = items[j]->rep;
    if (certified_non_conjugate(o, u, v, whole)) return r;
    for (auto const& e : ball.elements()) {
      if (e.length > caps.conjugator_radius) break;
      if (o.equal(conjugate(u, e.rep), v) == Verdict::Trivial) {
        r.found = true;
        r.length = e.length;
        r.conjugator = e.rep;
        return r;
      }
    }
    r.uncertified = true;
    return r;
  };
  auto r = scan_pairs(lengths, n, caps.convention, caps.workers, fn);
  record(r, out);
  if (r.best) {
    out.u1 = items[r.best->first]->rep;
    out.v1 = items[r.best->second]->rep;
    auto const& al = o.alphabet();
    out.sample.witness = show(out.u1, al) + " ~ " + show(out.v1, al) + " by " + show(out.conjugator, al);
  }
  return out;
}

CLSample cl_p(FibreSystem const& sys, long long n, CLFlavor flavor, CLCaps caps) {
  if (flavor == CLFlavor::G) return cl_g(sys.g_oracle(), n, caps);
  CLSample out;
  out.flavor = flavor;
  out.sample.n = n;
  if (n < 0) return out;
  auto const& o = *sys.g_oracle();
  struct Item {
    Word g1, g2;
    std::size_t length;
  };
  std::vector<Item> items;
  std::size_t p_radius = caps.conjugator_radius;
  if (flavor == CLFlavor::P) p_radius = std::max(p_radius, static_cast<std::size_t>(n));
  auto pball = PBall::build(sys, p_radius, caps.max_elements);
  if (!pball.complete()) out.sample.exactness = Exactness::LowerBound;
  if (flavor == CLFlavor::P) {
    for (auto const& e : pball.elements())
      if (static_cast<long long>(e.length) <= n) items.push_back({e.g1, e.g2, e.length});
  } else {
    auto gball = BallIndex::build(sys.g_oracle(), static_cast<std::size_t>(n), caps.max_elements);
    if (!gball.complete()) out.sample.exactness = Exactness::LowerBound;
    for (auto const& a : gball.elements())
      for (auto const& b : gball.elements()) {
        if (static_cast<long long>(a.length + b.length) > n) continue;
        Verdict m = p_membership(a.rep, b.rep, sys);
        if (m == Verdict::Unknown) out.sample.exactness = weaker(out.sample.exactness, Exactness::LowerBound);
        if (m == Verdict::Trivial) items.push_back({a.rep, b.rep, a.length + b.length});
      }
  }
  std::vector<std::size_t> lengths;
  for (auto const& it : items) lengths.push_back(it.length);
  auto gwhole = BallIndex::build(sys.g_oracle(), caps.conjugator_radius, caps.max_elements);
  BallIndex const* whole = gwhole.covers_group() ? &gwhole : nullptr;
  auto fn = [&](std::size_t i, std::size_t j) {
    PairOutcome r;
    if (i == j) {
      r.found = true;
      return r;
    }
    auto const& U = items[i];
    auto const& V = items[j];
    if (certified_non_conjugate(o, U.g1, V.g1, whole) || certified_non_conjugate(o, U.g2, V.g2, whole)) return r;
    for (auto const& e : pball.elements()) {
      if (e.length > caps.conjugator_radius) break;
      if (o.equal(conjugate(U.g1, e.g1), V.g1) != Verdict::Trivial) continue;
      if (o.equal(conjugate(U.g2, e.g2), V.g2) != Verdict::Trivial) continue;
      r.found = true;
      r.length = e.length;
      r.conjugator = e.p_word;
      return r;
    }
    r.uncertified = true;
    return r;
  };
  auto r = scan_pairs(lengths, n, caps.convention, caps.workers, fn);
  record(r, out);
  if (r.best) {
    auto const& [i, j] = *r.best;
    out.u1 = items[i].g1;
    out.u2 = items[i].g2;
    out.v1 = items[j].g1;
    out.v2 = items[j].g2;
    auto const& al = sys.G().alphabet();
    out.sample.witness = "(" + show(out.u1, al) + ", " + show(out.u2, al) + ") ~ (" + show(out.v1, al) + ", " +
                         show(out.v2, al) + ") by " + show(out.conjugator, sys.p_gens());
  }
  return out;
}

// ---- the constructive conjugator ----------------------------------------

namespace {

std::vector<std::pair<long long, long long>> exponent_scan_order(long long cap,
                                                                 std::optional<std::pair<long long, long long>> seed) {
  std::vector<std::pair<long long, long long>> order;
  if (seed) order.push_back(*seed);
  auto push = [&](long long a, long long b) {
    if (!seed || *seed != std::make_pair(a, b)) order.emplace_back(a, b);
  };
  push(0, 0);
  for (long long k = 1; k <= cap; ++k) {
    push(k, k);
    push(-k, -k);
  }
  for (long long s = 1; s <= 2 * cap; ++s)
    for (long long a = -std::min(s, cap); a <= std::min(s, cap); ++a) {
      long long rest = s - std::abs(a);
      if (rest > cap) continue;
      for (long long b : {rest, -rest}) {
        if (a == b) continue;
        push(a, b);
        if (rest == 0) break;
      }
    }
  return order;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ConjugatorCertificate construct_P_conjugator(Word const& u1, Word const& u2, Word const& v1, Word const& v2,
                                             FibreSystem const& sys, ConjugatorCaps caps) {
  ConjugatorCertificate c;
  c.u1 = u1;
  c.u2 = u2;
  c.v1 = v1;
  c.v2 = v2;
  auto const& go = sys.g_oracle();
  auto const& G = *go;

  c.stage = "membership";
  Verdict mu = p_membership(u1, u2, sys), mv = p_membership(v1, v2, sys);
  if (mu != Verdict::Trivial || mv != Verdict::Trivial) return c;

  auto finish = [&](Word zeta) {
    c.zeta = std::move(zeta);
    auto [z1, z2] = sys.coordinates(c.zeta);
    Word tz = sys.transcribe(c.zeta);
    c.conjugates = sys.gg_oracle()->equal(concat({invert(tz), sys.embed(u1, u2), tz}), sys.embed(v1, v2));
    c.member = p_membership(z1, z2, sys);
    c.ok = c.conjugates == Verdict::Trivial && c.member == Verdict::Trivial;
    c.stage = c.ok ? "done" : "verify";
  };

  c.stage = "diagonal";
  Verdict t1 = G.query(u1), t2 = G.query(u2);
  if (t1 == Verdict::Trivial || t2 == Verdict::Trivial) {
    c.diagonal_case = true;
    Word const& a = t2 == Verdict::Trivial ? u1 : u2;
    Word const& b = t2 == Verdict::Trivial ? v1 : v2;
    auto s = conjugacy_search(go, a, b, caps.g_radius);
    if (s.status != ConjugacySearch::Status::Found) return c;
    c.gamma = s.conjugator;
    finish(sys.diagonal(c.gamma));
    return c;
  }

  c.stage = "reduce_second";
  auto sg = conjugacy_search(go, u2, v2, caps.g_radius);
  if (sg.status != ConjugacySearch::Status::Found) return c;
  c.g = sg.conjugator;
  Word v1p = concat({c.g, v1, invert(c.g)});

  c.stage = "first_conjugator";
  auto sgam = conjugacy_search(go, u1, v1p, caps.g_radius);
  if (sgam.status != ConjugacySearch::Status::Found) return c;
  c.gamma = sgam.conjugator;

  c.stage = "roots";
  auto r1 = primitive_root(u1, go, caps.root_length, caps.root_exponent);
  auto r2 = primitive_root(u2, go, caps.root_length, caps.root_exponent);
  c.y1 = r1 ? r1->root : u1;
  c.e1 = r1 ? r1->exponent : 1;
  c.y2 = r2 ? r2->root : u2;
  c.e2 = r2 ? r2->exponent : 1;

  c.stage = "exponent_scan";
  auto const& Q = *sys.q_oracle();
  bool hit = false;
  for (auto [q1, q2] : exponent_scan_order(caps.q_cap, caps.seed)) {
    Word cand = concat({power(c.y2, -q2), power(c.y1, q1), c.gamma});
    if (Q.query(cand) == Verdict::Trivial) {
      c.q1 = q1;
      c.q2 = q2;
      hit = true;
      break;
    }
  }
  if (!hit) return c;

  c.stage = "normalize";
  c.p = floor_div(c.q2, c.e2);
  c.r2 = c.q2 - c.p * c.e2;
  c.p_prime = c.q1 - c.p * c.e1;
  c.p_final = c.p_prime;

  c.stage = "torsion";
  Order om = order_of(c.y1, Q, caps.order_cutoff);
  if (om.kind == Order::Kind::Finite) {
    c.omega = om.value;
    long long w = om.value;
    if (w < 2 * std::abs(c.p_prime)) {
      long long r = ((c.p_prime % w) + w) % w;
      if (2 * r > w) r -= w;
      c.p_final = r;
      c.torsion_step = true;
    }
  }

  c.stage = "lift";
  Word g1 = power(c.y1, c.p_final) * c.gamma;
  Word g2 = power(c.y2, c.r2);
  auto lift = lift_pair(g1, g2, sys, caps.area);
  if (!lift) return c;
  c.area_steps = lift->area.area;
  finish(lift->p_word * sys.diagonal(c.g));
  return c;
}

HardInstance hard_conjugacy_instance(FibreSystem const& sys, long long n, DistortionCaps caps) {
  if (sys.A().empty()) throw Error("hard instance needs a nonempty A");
  HardInstance h;
  h.a = Word{Letter::make(sys.A().front())};
  if (n > 0) {
    auto const& G = *sys.g_oracle();
    auto moves_a = [&](Word const& g) { return G.equal(conjugate(h.a, g), h.a) == Verdict::Nontrivial; };
    auto w = hard_distortion_witness(sys, n, caps, moves_a);
    if (w.gamma.empty()) w = hard_distortion_witness(sys, n, caps);
    h.gamma = w.gamma;
    h.exactness = w.exactness;
  }
  h.u1 = h.u2 = h.v2 = h.a;
  h.v1 = conjugate(h.a, h.gamma);
  h.u_p_word = sys.diagonal(h.a);
  Word a1{sys.a_letter(0)};
  Word dg = sys.diagonal(h.gamma);
  h.v_p_word = concat({invert(dg), a1, dg, invert(a1), h.u_p_word});
  auto pball = PBall::build(sys, caps.p_radius, caps.max_elements);
  if (auto const* e = pball.find(h.u1, h.u2)) h.u_p_length = e->length;
  if (auto const* e = pball.find(h.v1, h.v2)) h.v_p_length = e->length;
  h.bound = static_cast<std::size_t>(2 * std::max(0LL, n) + 2);
  std::size_t measured = h.v_p_length ? *h.v_p_length : h.v_p_word.size();
  if (!h.v_p_length && (!pball.complete() || pball.radius() < h.v_p_word.size()))
    h.exactness = weaker(h.exactness, Exactness::LowerBound);
  h.bound_holds = measured <= h.bound;
  return h;
}

CentraliserForm centraliser_form(Word const& z1, Word const& z2, HardInstance const& h, FibreSystem const& sys,
                                 long long cap) {
  CentraliserForm out;
  auto const& G = *sys.g_oracle();
  auto root = primitive_root(h.a, sys.g_oracle(), h.a.size(), 6);
  Word a0 = root ? root->root : h.a;
  bool undecided = false;
  std::optional<long long> p, q;
  for (long long k = -cap; k <= cap && !(p && q); ++k) {
    Word ak = power(a0, k);
    if (!p) {
      Verdict v = G.equal(z1, ak * h.gamma);
      if (v == Verdict::Trivial) p = k;
      if (v == Verdict::Unknown) undecided = true;
    }
    if (!q) {
      Verdict v = G.equal(z2, ak);
      if (v == Verdict::Trivial) q = k;
      if (v == Verdict::Unknown) undecided = true;
    }
  }
  if (p && q) {
    out.holds = Verdict::Trivial;
    out.p = *p;
    out.q = *q;
  } else {
    out.holds = undecided ? Verdict::Unknown : Verdict::Nontrivial;
  }
  return out;
}

// ---- cyclic sub-semigroups ----------------------------------------------

std::string to_string(SemigroupMembership::Kind k) {
  switch (k) {
    case SemigroupMembership::Kind::Member: return "member";
    case SemigroupMembership::Kind::NonMember: return "non_member";
    case SemigroupMembership::Kind::Unknown: return "unknown";
  }
  return "?";
}

SemigroupMembership cyclic_semigroup_membership(Word const& x, Word const& y, WordProblemOracle const& oracle,
                                                long long rho, bool rho_valid) {
  SemigroupMembership out;
  bool undecided = false;
  for (long long p = 1; p <= rho; ++p) {
    Verdict v = oracle.equal(x, power(y, p));
    if (v == Verdict::Trivial) {
      out.kind = SemigroupMembership::Kind::Member;
      out.p = p;
      return out;
    }
    if (v == Verdict::Unknown) undecided = true;
  }
  out.kind = !undecided && rho_valid ? SemigroupMembership::Kind::NonMember : SemigroupMembership::Kind::Unknown;
  return out;
}

}  // namespace cgt
