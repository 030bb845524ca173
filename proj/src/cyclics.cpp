#include "cgt/cyclics.hpp"

#include <cstdlib>

namespace cgt {

std::vector<long long> BallIndex::key(Word const& w) const {
  auto v = exponent_sums(w, oracle_->rank());
  if (auto const* lat = oracle_->abelianization()) return lat->canonical(std::move(v));
  return {};
}

std::optional<std::size_t> BallIndex::find(Word const& w, std::vector<long long> const& k, bool& undecided) const {
  auto it = buckets_.find(k);
  if (it == buckets_.end()) return std::nullopt;
  for (auto idx : it->second) {
    Verdict v = oracle_->equal(w, entries_[idx].rep);
    if (v == Verdict::Trivial) return idx;
    if (v == Verdict::Unknown) undecided = true;
  }
  return std::nullopt;
}

BallIndex BallIndex::build(OraclePtr oracle, std::size_t radius, std::size_t max_elements) {
  BallIndex b;
  b.oracle_ = std::move(oracle);
  b.radius_ = radius;
  auto const* lat = b.oracle_->abelianization();
  std::string kind = b.oracle_->kind();
  if (kind == "free") {
    b.exact_metric_ = Metric::Free;
  } else if (kind == "abelian" && lat && lat->is_zero_lattice()) {
    b.exact_metric_ = Metric::L1;
  }
  b.dedup_ = b.exact_metric_ == Metric::Free ? "free reduction"
             : lat                           ? "abelianization bucket + oracle equality"
                                             : "oracle equality";
  b.entries_.push_back({Word{}, 0});
  b.buckets_[b.key(Word{})].push_back(0);
  std::size_t layer_begin = 0;
  std::size_t n_letters = 2 * b.oracle_->rank();
  for (std::size_t r = 0; r < radius; ++r) {
    std::size_t layer_end = b.entries_.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t code = 0; code < n_letters; ++code) {
        Letter l{static_cast<std::uint16_t>(code)};
        Word const& rep = b.entries_[i].rep;
        if (!rep.empty() && rep.back() == l.inverse()) continue;
        Word v = rep * Word{l};
        auto k = b.key(v);
        if (b.exact_metric_ != Metric::Free) {
          bool undecided = false;
          if (b.find(v, k, undecided)) continue;
          if (undecided) b.complete_ = false;
        }
        if (b.entries_.size() >= max_elements) {
          b.complete_ = false;
          b.radius_ = r;
          return b;
        }
        b.buckets_[k].push_back(b.entries_.size());
        b.entries_.push_back({std::move(v), r + 1});
      }
    }
    if (b.entries_.size() == layer_end) {
      b.saturated_ = true;
      break;
    }
    layer_begin = layer_end;
  }
  return b;
}

std::optional<std::size_t> BallIndex::length_of(Word const& g) const {
  switch (exact_metric_) {
    case Metric::Free: return g.size();
    case Metric::L1: {
      std::size_t s = 0;
      for (auto x : exponent_sums(g, oracle_->rank())) s += static_cast<std::size_t>(std::llabs(x));
      return s;
    }
    case Metric::None: break;
  }
  bool undecided = false;
  auto idx = find(g, key(g), undecided);
  if (!idx) return std::nullopt;
  return entries_[*idx].length;
}

std::optional<std::size_t> geodesic_length(Word const& g, BallIndex const& ball) { return ball.length_of(g); }

TauBound translation_number_bound(Word const& g, long long max_n, BallIndex const& ball) {
  TauBound out;
  if (ball.oracle()->query(g) == Verdict::Trivial) {
    out.tau_upper = Rational(0);
    out.argmin_n = 1;
    return out;
  }
  for (long long n = 1; n <= max_n; ++n) {
    auto len = ball.length_of(power(g, n));
    if (!len) {
      ++out.uncertified;
      continue;
    }
    Rational r(static_cast<long long>(*len), n);
    if (!out.tau_upper || r < *out.tau_upper) {
      out.tau_upper = r;
      out.argmin_n = n;
    }
  }
  return out;
}

namespace {

// Certified lengths |g^n| for n = 1..cap; nullopt entries are uncertified.
std::vector<std::optional<std::size_t>> power_lengths(Word const& g, long long cap, BallIndex const& ball) {
  std::vector<std::optional<std::size_t>> out(static_cast<std::size_t>(cap) + 1);
  out[0] = 0;
  for (long long n = 1; n <= cap; ++n) out[static_cast<std::size_t>(n)] = ball.length_of(power(g, n));
  return out;
}

CyclicGeometryReport scan(BallIndex const& ball, long long power_cap, bool want_lambda, bool want_k) {
  CyclicGeometryReport rep;
  rep.radius = ball.radius();
  rep.power_cap = power_cap;
  rep.ball_complete = ball.complete();
  for (auto const& e : ball.elements()) {
    if (e.length == 0) continue;
    auto lens = power_lengths(e.rep, power_cap, ball);
    // Torsion: some certified power of length 0.
    long long order = 0;
    for (long long n = 1; n <= power_cap && !order; ++n)
      if (lens[static_cast<std::size_t>(n)] == std::size_t{0}) order = n;
    if (order) {
      if (!rep.torsion_witness) rep.torsion_witness = std::make_pair(e.rep, order);
      continue;
    }
    for (long long n = 1; n <= power_cap; ++n) {
      auto const& ln = lens[static_cast<std::size_t>(n)];
      if (!ln) {
        ++rep.uncertified;
        continue;
      }
      if (want_lambda) {
        Rational r(static_cast<long long>(*ln), n);
        if (!rep.lambda_hat || r < *rep.lambda_hat) {
          rep.lambda_hat = r;
          rep.lambda_witness = e.rep;
          rep.lambda_witness_n = n;
        }
      }
      if (want_k) {
        for (long long i = 1; i < n; ++i) {
          auto const& li = lens[static_cast<std::size_t>(i)];
          if (!li) continue;
          Rational r(static_cast<long long>(*li), static_cast<long long>(*ln));
          if (!rep.k_hat || r > *rep.k_hat) {
            rep.k_hat = r;
            rep.k_witness = e.rep;
            rep.k_witness_i = i;
            rep.k_witness_p = n;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace

CyclicGeometryReport uqc_estimate(BallIndex const& ball, long long power_cap) {
  return scan(ball, power_cap, true, false);
}

CyclicGeometryReport umc_estimate(BallIndex const& ball, long long power_cap) {
  return scan(ball, power_cap, false, true);
}

std::optional<RootResult> primitive_root(Word const& g, OraclePtr oracle, std::size_t length_cap, long long exp_cap) {
  if (g.size() > length_cap) return std::nullopt;
  auto ball = BallIndex::build(oracle, length_cap);
  bool exhaustive = ball.complete();
  for (auto const& e : ball.elements()) {
    if (e.length == 0) continue;
    for (long long k = exp_cap; k >= 2; --k) {
      Verdict v = oracle->equal(power(e.rep, k), g);
      if (v == Verdict::Unknown) exhaustive = false;
      if (v == Verdict::Trivial) return RootResult{e.rep, k, exhaustive};
    }
  }
  return RootResult{g, 1, exhaustive};
}

}  // namespace cgt
