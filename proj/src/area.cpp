#include "cgt/area.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_set>

namespace cgt {

std::string to_string(AreaResult::Status s) {
  switch (s) {
    case AreaResult::Status::Exact: return "exact";
    case AreaResult::Status::UpperBound: return "upper_bound";
    case AreaResult::Status::Exhausted: return "exhausted";
  }
  return "exhausted";
}

std::size_t decomposition_noise(std::vector<AreaFactor> const& factors) {
  if (factors.empty()) return 0;
  std::size_t noise = factors.front().theta.size() + factors.back().theta.size();
  for (std::size_t i = 0; i + 1 < factors.size(); ++i)
    noise += (factors[i].theta * invert(factors[i + 1].theta)).size();
  return noise;
}

Word decomposition_product(std::vector<AreaFactor> const& factors) {
  Word out;
  for (auto const& f : factors) out = out * conjugate(f.rho, f.theta);
  return out;
}

bool verify_decomposition(Word const& w, AreaDecomposition const& d, SymmetrizedClosure const& closure) {
  for (auto const& f : d.factors)
    if (!closure.contains(f.rho)) return false;
  if (decomposition_product(d.factors) != w) return false;
  return decomposition_noise(d.factors) == d.noise;
}

bool verify_decomposition(Word const& w, AreaDecomposition const& d, Presentation const& p) {
  return verify_decomposition(w, d, SymmetrizedClosure(p));
}

AreaDecomposition minimize_noise(AreaDecomposition const& d) {
  std::size_t m = d.factors.size();
  if (m == 0) return d;
  // Options per factor: theta^-1 (a b) theta = (a^-1 theta)^-1 (b a) (a^-1 theta)
  //                                          = (b theta)^-1 (b a) (b theta).
  std::vector<std::vector<AreaFactor>> opts(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto const& [theta, rho] = d.factors[i];
    opts[i].push_back(d.factors[i]);
    for (std::size_t k = 0; k < rho.size(); ++k) {
      Word a = rho.subword(0, k), b = rho.subword(k, rho.size() - k);
      Word rot = rotate(rho, k);
      opts[i].push_back({invert(a) * theta, rot});
      opts[i].push_back({b * theta, rot});
    }
  }
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> cost(m), from(m);
  for (std::size_t j = 0; j < opts[0].size(); ++j) {
    cost[0].push_back(opts[0][j].theta.size());
    from[0].push_back(0);
  }
  for (std::size_t i = 1; i < m; ++i) {
    cost[i].assign(opts[i].size(), kInf);
    from[i].assign(opts[i].size(), 0);
    for (std::size_t j = 0; j < opts[i].size(); ++j) {
      Word inv = invert(opts[i][j].theta);
      for (std::size_t k = 0; k < opts[i - 1].size(); ++k) {
        std::size_t c = cost[i - 1][k] + (opts[i - 1][k].theta * inv).size();
        if (c < cost[i][j]) {
          cost[i][j] = c;
          from[i][j] = k;
        }
      }
    }
  }
  std::size_t best = 0, best_cost = kInf;
  for (std::size_t j = 0; j < opts[m - 1].size(); ++j) {
    std::size_t c = cost[m - 1][j] + opts[m - 1][j].theta.size();
    if (c < best_cost) {
      best_cost = c;
      best = j;
    }
  }
  AreaDecomposition out;
  out.factors.resize(m);
  for (std::size_t i = m; i-- > 0;) {
    out.factors[i] = opts[i][best];
    best = from[i][best];
  }
  out.noise = decomposition_noise(out.factors);
  if (out.noise > d.noise) return d;
  return out;
}

// ---- solver -------------------------------------------------------------

namespace {

// Longest word on any m-move path from a word of length n to 1: the j-th word
// has length <= n + jL and <= (m - j)L.
std::size_t span_bound(std::size_t n, std::size_t m, std::size_t L) {
  std::size_t s = 0;
  for (std::size_t j = 0; j < m; ++j) s = std::max(s, std::min(n + j * L, (m - j) * L));
  return s;
}

// Largest m whose paths all fit under length cap c.
std::size_t fitting_moves(std::size_t n, std::size_t c, std::size_t L, std::size_t limit) {
  std::size_t m = 0;
  while (m < limit && span_bound(n, m + 1, L) <= c) ++m;
  return m;
}

}  // namespace

AreaSolver::AreaSolver(Presentation p) : presentation_(std::move(p)), closure_(presentation_) {
  L_ = presentation_.max_relator_length();
}

AreaSolver::Run AreaSolver::bfs(Word const& w, std::size_t length_cap, std::size_t depth_limit,
                                std::size_t state_cap) const {
  struct Node {
    std::uint32_t parent;
    Move move;
  };
  Run run;
  std::vector<Node> nodes{{0, Move{}}};
  std::unordered_set<Word> seen{w};
  std::vector<std::pair<Word, std::uint32_t>> layer{{w, 0}};
  bool pruned = false;
  auto finish = [&](std::uint32_t parent, Move const& last) {
    std::vector<Move> rev{last};
    for (std::uint32_t i = parent; i != 0; i = nodes[i].parent) rev.push_back(nodes[i].move);
    run.path = std::vector<Move>(rev.rbegin(), rev.rend());
  };
  for (std::size_t d = 0; d < depth_limit && !layer.empty(); ++d) {
    std::size_t remaining = depth_limit - d - 1;
    std::vector<std::pair<Word, std::uint32_t>> next;
    for (auto const& [u, idx] : layer) {
      std::optional<Move> goal;
      for_each_move(u, closure_, [&](Move const& m) {
        Word v = apply_move(u, m);
        if (v.empty()) {
          goal = m;
          return true;
        }
        if (v.size() > length_cap || v.size() > L_ * remaining) {
          pruned = true;
          return false;
        }
        if (seen.contains(v)) return false;
        if (seen.size() >= state_cap) {
          run.budget_hit = true;
          return true;
        }
        seen.insert(v);
        nodes.push_back({idx, m});
        next.emplace_back(std::move(v), static_cast<std::uint32_t>(nodes.size() - 1));
        return false;
      });
      if (goal) {
        finish(idx, *goal);
        run.full_depth = d;
        run.states = seen.size();
        return run;
      }
      if (run.budget_hit) {
        run.full_depth = d;
        run.states = seen.size();
        return run;
      }
    }
    run.full_depth = d + 1;
    layer = std::move(next);
  }
  // An empty layer means no path of length <= depth_limit survives.
  if (layer.empty()) run.full_depth = depth_limit;
  run.closed = layer.empty() && !pruned;
  run.states = seen.size();
  return run;
}

AreaResult AreaSolver::solve(Word const& w, AreaCaps caps) const {
  AreaResult res;
  if (w.empty()) {
    res.status = AreaResult::Status::Exact;
    res.certificate = AreaDecomposition{};
    res.noise_within_bound = true;
    return res;
  }
  if (L_ == 0) {
    res.closed = true;
    return res;
  }
  std::size_t n = w.size();
  std::size_t length_cap = caps.length_cap ? std::max(caps.length_cap, n) : n + 2 * L_ + 4;
  res.lower_bound = (n + L_ - 1) / L_;
  std::optional<std::vector<Move>> best;
  std::size_t budget = caps.state_cap;
  std::size_t c = n;
  for (;;) {
    std::size_t limit = best ? best->size() - 1 : caps.area_cap;
    if (best && res.lower_bound >= best->size()) break;
    if (limit < res.lower_bound) break;
    Run run = bfs(w, c, limit, budget);
    res.states += run.states;
    res.length_cap_used = c;
    budget = budget > run.states ? budget - run.states : 0;
    std::size_t explored = run.path ? run.path->size() - 1 : run.full_depth;
    std::size_t fits = fitting_moves(n, c, L_, explored + 1);
    res.lower_bound = std::max(res.lower_bound, std::min(explored, fits) + 1);
    if (run.path) best = std::move(run.path);
    if (run.closed && !best) {
      res.closed = true;
      break;
    }
    if (best && res.lower_bound >= best->size()) break;
    if (run.budget_hit || budget == 0 || c >= length_cap) break;
    std::size_t next = c + 2;
    if (best && best->size() >= 2) next = std::max(next, span_bound(n, best->size() - 1, L_));
    c = std::min(next, length_cap);
  }
  if (!best) return res;
  res.area = best->size();
  res.lower_bound = std::min(res.lower_bound, res.area);
  res.status = res.lower_bound >= res.area ? AreaResult::Status::Exact : AreaResult::Status::UpperBound;
  // Certificate: u_{j-1} = u_j * f_j, hence w = f_M ... f_1.
  AreaDecomposition d;
  Word u = w;
  for (auto const& m : *best) {
    auto [theta, rho] = move_factor(u, m);
    d.factors.push_back({std::move(theta), std::move(rho)});
    u = apply_move(u, m);
  }
  std::reverse(d.factors.begin(), d.factors.end());
  d.noise = decomposition_noise(d.factors);
  d = minimize_noise(d);
  res.noise_within_bound = d.noise <= res.area * L_ + n;
  res.certificate = std::move(d);
  return res;
}

AreaResult area(Presentation const& p, Word const& w, AreaCaps caps) { return AreaSolver(p).solve(w, caps); }

// ---- function tables ----------------------------------------------------

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::LowerBound: return "lower_bound";
    case Exactness::BudgetExhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

Exactness weaker(Exactness a, Exactness b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

FunctionContext::FunctionContext(Presentation p, OraclePtr oracle, FunctionCaps caps)
    : solver_(std::move(p)), oracle_(std::move(oracle)), caps_(caps) {}

AreaResult const& FunctionContext::area_of(Word const& w) {
  Word key = cyclic_canonical(w);
  {
    std::lock_guard lock(mu_);
    if (auto it = areas_.find(key); it != areas_.end()) return it->second;
  }
  AreaResult r = solver_.solve(key, caps_.area);
  std::lock_guard lock(mu_);
  return areas_.emplace(std::move(key), std::move(r)).first->second;
}

Order const& FunctionContext::order_of(Word const& u) {
  {
    std::lock_guard lock(mu_);
    if (auto it = orders_.find(u); it != orders_.end()) return it->second;
  }
  Order o = cgt::order_of(u, *oracle_, caps_.order_cutoff);
  std::lock_guard lock(mu_);
  return orders_.emplace(u, o).first->second;
}

BallIndex const& FunctionContext::ball(std::size_t radius) {
  std::lock_guard lock(mu_);
  auto& slot = balls_[radius];
  if (!slot) slot = std::make_unique<BallIndex>(BallIndex::build(oracle_, radius));
  return *slot;
}

std::vector<Word> words_of_length(std::size_t rank, std::size_t n) {
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::size_t codes = 2 * rank;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == n) {
      out.push_back(from_reduced(cur));
      return;
    }
    for (std::size_t c = 0; c < codes; ++c) {
      Letter l{static_cast<std::uint16_t>(c)};
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      self(self);
      cur.pop_back();
    }
  };
  if (n == 0 || rank > 0) rec(rec);
  return out;
}

Word cyclic_canonical(Word const& w) {
  Word core = cyclic_reduce(w).core;
  if (core.empty()) return core;
  Word best = core;
  for (auto const& s : {core, invert(core)})
    for (std::size_t k = 0; k < s.size(); ++k) {
      Word r = rotate(s, k);
      if (shortlex_less(r, best)) best = std::move(r);
    }
  return best;
}

namespace {

struct Best {
  long long value = 0;
  Exactness exactness = Exactness::Exact;
  std::string witness;

  void offer(long long v, std::string const& why) {
    if (witness.empty() || v > value) {
      value = std::max(value, v);
      witness = why;
    }
  }
  void downgrade(Exactness e) { exactness = weaker(exactness, e); }
};

// Value used for a word whose area search may be incomplete.
long long area_value(AreaResult const& r, Best& b) {
  if (r.exact()) return static_cast<long long>(r.area);
  b.downgrade(Exactness::BudgetExhausted);
  return static_cast<long long>(r.found() ? r.area : r.lower_bound);
}

}  // namespace

Sample dehn_function(FunctionContext& ctx, long long n) {
  auto const& p = ctx.presentation();
  Best best;
  for (long long len = 1; len <= n; ++len) {
    for (auto const& w : words_of_length(p.rank(), static_cast<std::size_t>(len))) {
      // Area is invariant under cyclic permutation and inversion.
      if (!is_cyclically_reduced(w) || cyclic_canonical(w) != w) continue;
      Verdict v = ctx.oracle().query(w);
      if (v == Verdict::Unknown) best.downgrade(Exactness::LowerBound);
      if (v != Verdict::Trivial) continue;
      best.offer(area_value(ctx.area_of(w), best), p.format(w));
    }
  }
  return {n, best.value, best.exactness, best.witness};
}

namespace {

std::vector<Word> words_up_to(std::size_t rank, long long n) {
  std::vector<Word> out;
  for (long long len = 0; len <= n; ++len) {
    auto ws = words_of_length(rank, static_cast<std::size_t>(len));
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

bool is_zero(std::vector<Rational> const& v) {
  return std::all_of(v.begin(), v.end(), [](Rational const& x) { return x.numerator() == 0; });
}

struct PSet {
  std::vector<long long> values;
  Exactness exactness = Exactness::Exact;
};

// All p with w u^p = 1 inside the variant's window, for u of order `o`.
PSet solve_p(FunctionContext& ctx, Word const& w, Word const& u, Order const& o, CyclicsVariant variant) {
  PSet out;
  auto const& oracle = ctx.oracle();
  long long cutoff = ctx.caps().order_cutoff;
  auto check = [&](long long p) {
    Verdict v = oracle.query(w * power(u, p));
    if (v == Verdict::Trivial) out.values.push_back(p);
    if (v == Verdict::Unknown) out.exactness = weaker(out.exactness, Exactness::LowerBound);
  };
  if (o.finite()) {
    long long lim = variant == CyclicsVariant::O ? o.value : o.value / 2;
    for (long long p = -lim; p <= lim; ++p) check(p);
    return out;
  }
  if (o.kind == Order::Kind::Unknown) {
    out.exactness = Exactness::BudgetExhausted;
    return out;
  }
  if (!o.proven_infinite) out.exactness = Exactness::BudgetExhausted;
  // Infinite order: at most one p. Try a certified candidate first.
  if (auto const* lat = oracle.abelianization()) {
    auto ru = lat->residual(exponent_sums(u, oracle.rank()));
    if (!is_zero(ru)) {
      auto rw = lat->residual(exponent_sums(w, oracle.rank()));
      std::size_t i = 0;
      while (ru[i].numerator() == 0) ++i;
      Rational p = -rw[i] / ru[i];
      bool consistent = p.denominator() == 1;
      for (std::size_t k = 0; k < ru.size() && consistent; ++k) consistent = rw[k] + p * ru[k] == Rational(0);
      if (consistent) check(p.numerator());
      return out;
    }
  }
  if (oracle.kind() == "free") {
    long long lim = static_cast<long long>(w.size() / cyclic_reduce(u).core.size());
    for (long long p = -lim; p <= lim; ++p) check(p);
    return out;
  }
  for (long long p = -cutoff; p <= cutoff; ++p) {
    check(p);
    if (!out.values.empty() && o.proven_infinite) return out;
  }
  out.exactness = weaker(out.exactness, Exactness::LowerBound);
  return out;
}

}  // namespace

Sample rel_cyclics_family(FunctionContext& ctx, long long n, CyclicsVariant variant) {
  auto const& p = ctx.presentation();
  auto const& oracle = ctx.oracle();
  bool sum = ctx.caps().convention == PairConvention::Sum;
  Best best;
  auto all = words_up_to(p.rank(), n);
  for (auto const& u : all) {
    if (u.empty()) {
      // u = 1 has order 1: only p = 0, excluded from the infinite-order variant.
      if (variant == CyclicsVariant::Z) continue;
    }
    long long wmax = sum ? n - static_cast<long long>(u.size()) : n;
    Verdict ut = u.empty() ? Verdict::Trivial : oracle.query(u);
    if (ut == Verdict::Unknown) best.downgrade(Exactness::BudgetExhausted);
    if (ut == Verdict::Trivial) {
      if (variant == CyclicsVariant::Z) continue;
      for (auto const& w : all) {
        if (static_cast<long long>(w.size()) > wmax) break;
        Verdict v = oracle.query(w);
        if (v == Verdict::Unknown) best.downgrade(Exactness::LowerBound);
        if (v != Verdict::Trivial) continue;
        best.offer(area_value(ctx.area_of(w), best), "w=" + p.format(w) + " u=" + p.format(u) + " p=0");
      }
      continue;
    }
    Order const& o = ctx.order_of(u);
    if (variant == CyclicsVariant::Z) {
      if (o.finite()) continue;
      if (o.kind == Order::Kind::Unknown || !o.proven_infinite) best.downgrade(Exactness::BudgetExhausted);
      if (o.kind == Order::Kind::Unknown) continue;
    }
    for (auto const& w : all) {
      if (static_cast<long long>(w.size()) > wmax) break;
      PSet ps = solve_p(ctx, w, u, o, variant);
      best.downgrade(ps.exactness);
      for (long long pp : ps.values) {
        Word target = w * power(u, pp);
        long long v = area_value(ctx.area_of(target), best) + std::llabs(pp) * n;
        best.offer(v, "w=" + p.format(w) + " u=" + p.format(u) + " p=" + std::to_string(pp));
      }
    }
  }
  return {n, best.value, best.exactness, best.witness};
}

namespace {

bool relator_sums_vanish(Presentation const& p) {
  for (auto const& r : p.relators())
    for (auto x : exponent_sums(r, p.rank()))
      if (x != 0) return false;
  return true;
}

}  // namespace

Sample return_of_cyclics(FunctionContext& ctx, long long n) {
  auto const& p = ctx.presentation();
  auto const& oracle = ctx.oracle();
  auto const& ball = ctx.ball(static_cast<std::size_t>(n));
  Best best;
  if (!ball.complete()) best.downgrade(Exactness::LowerBound);
  bool l1_bound = relator_sums_vanish(p);
  for (auto const& e : ball.elements()) {
    if (e.length == 0) continue;
    Order const& o = ctx.order_of(e.rep);
    if (o.finite()) continue;
    if (o.kind == Order::Kind::Unknown || !o.proven_infinite) best.downgrade(Exactness::BudgetExhausted);
    if (o.kind == Order::Kind::Unknown) continue;
    // |u^p| >= |p| * |ab(u)|_1 when every relator has zero exponent sums;
    // |u^p| >= |p| in free groups.
    long long lim = ctx.caps().order_cutoff;
    bool certified = false;
    if (oracle.kind() == "free") {
      lim = n;
      certified = true;
    } else if (l1_bound) {
      long long l1 = 0;
      for (auto x : exponent_sums(e.rep, oracle.rank())) l1 += std::llabs(x);
      if (l1 > 0) {
        lim = n / l1;
        certified = true;
      }
    }
    long long top = 0;
    for (long long k = 1; k <= lim; ++k) {
      auto len = ball.length_of(power(e.rep, k));
      if (len && static_cast<long long>(*len) <= n) top = k;
    }
    if (!certified) best.downgrade(Exactness::LowerBound);
    best.offer(top, "u=" + p.format(e.rep) + " p=" + std::to_string(top));
  }
  return {n, best.value, best.exactness, best.witness};
}

Sample torsion_evolution(FunctionContext& ctx, long long n) {
  auto const& p = ctx.presentation();
  auto const& ball = ctx.ball(static_cast<std::size_t>(n));
  Best best;
  best.offer(1, "u=1");
  if (!ball.complete()) best.downgrade(Exactness::LowerBound);
  for (auto const& e : ball.elements()) {
    if (e.length == 0) continue;
    Order const& o = ctx.order_of(e.rep);
    if (o.kind == Order::Kind::Unknown) {
      best.downgrade(Exactness::BudgetExhausted);
      continue;
    }
    if (o.infinite()) {
      if (!o.proven_infinite) best.downgrade(Exactness::LowerBound);
      continue;
    }
    best.offer(o.value, "u=" + p.format(e.rep) + " o=" + std::to_string(o.value));
  }
  return {n, best.value, best.exactness, best.witness};
}

FunctionTable function_table(FunctionContext& ctx, std::string const& fn, long long max_n, unsigned workers) {
  std::function<Sample(long long)> f;
  if (fn == "delta") {
    f = [&](long long n) { return dehn_function(ctx, n); };
  } else if (fn == "delta_c") {
    f = [&](long long n) { return rel_cyclics_family(ctx, n, CyclicsVariant::C); };
  } else if (fn == "delta_z") {
    f = [&](long long n) { return rel_cyclics_family(ctx, n, CyclicsVariant::Z); };
  } else if (fn == "delta_o") {
    f = [&](long long n) { return rel_cyclics_family(ctx, n, CyclicsVariant::O); };
  } else if (fn == "frak_m") {
    f = [&](long long n) { return return_of_cyclics(ctx, n); };
  } else if (fn == "frak_t") {
    f = [&](long long n) { return torsion_evolution(ctx, n); };
  } else {
    throw Error("unknown function '" + fn + "'");
  }
  FunctionTable t;
  t.name = fn;
  t.samples.resize(static_cast<std::size_t>(std::max<long long>(max_n, 0)));
  std::atomic<long long> next{1};
  auto work = [&] {
    for (long long n; (n = next++) <= max_n;) t.samples[static_cast<std::size_t>(n - 1)] = f(n);
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < std::max(1u, workers); ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  auto const& caps = ctx.caps();
  t.budget["length_cap"] = static_cast<long long>(caps.area.length_cap);
  t.budget["area_cap"] = static_cast<long long>(caps.area.area_cap);
  t.budget["state_cap"] = static_cast<long long>(caps.area.state_cap);
  t.budget["order_cutoff"] = caps.order_cutoff;
  return t;
}

}  // namespace cgt
