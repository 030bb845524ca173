#pragma once

#include <map>
#include <optional>

#include "cgt/wp.hpp"

namespace cgt {

// Ball of radius r in the Cayley graph, one shortlex-least geodesic
// representative per group element. Elements are deduplicated by oracle
// equality inside buckets keyed by the abelianization class.
class BallIndex {
 public:
  struct Entry {
    Word rep;
    std::size_t length = 0;
  };

  static BallIndex build(OraclePtr oracle, std::size_t radius, std::size_t max_elements = 500000);

  std::size_t radius() const noexcept { return radius_; }
  // Every element of length <= radius appears exactly once with its true length.
  bool complete() const noexcept { return complete_; }
  // Complete, and the last layer added nothing: the ball is the whole group.
  bool covers_group() const noexcept { return complete_ && saturated_; }
  std::vector<Entry> const& elements() const noexcept { return entries_; }
  std::string const& dedup_method() const noexcept { return dedup_; }
  OraclePtr const& oracle() const noexcept { return oracle_; }
  // Lengths are exact at any size (free groups, free abelian groups).
  bool lengths_exact_beyond_radius() const noexcept { return exact_metric_ != Metric::None; }

  // Geodesic length of g; nullopt if g lies outside the ball or equality
  // could not be decided.
  std::optional<std::size_t> length_of(Word const& g) const;

 private:
  enum class Metric { None, Free, L1 };
  std::vector<long long> key(Word const& w) const;
  std::optional<std::size_t> find(Word const& w, std::vector<long long> const& k, bool& undecided) const;

  OraclePtr oracle_;
  std::size_t radius_ = 0;
  bool complete_ = true;
  bool saturated_ = false;
  std::string dedup_;
  Metric exact_metric_ = Metric::None;
  std::vector<Entry> entries_;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
};

std::optional<std::size_t> geodesic_length(Word const& g, BallIndex const& ball);

struct TauBound {
  std::optional<Rational> tau_upper;  // min over certified n of |g^n|/n
  long long argmin_n = 0;
  std::size_t uncertified = 0;        // powers whose length was not certified
};
TauBound translation_number_bound(Word const& g, long long max_n, BallIndex const& ball);

struct CyclicGeometryReport {
  std::size_t radius = 0;
  long long power_cap = 0;
  bool ball_complete = false;
  std::optional<Rational> lambda_hat;
  Word lambda_witness;
  long long lambda_witness_n = 0;
  std::optional<Rational> k_hat;
  Word k_witness;
  long long k_witness_i = 0, k_witness_p = 0;
  std::optional<std::pair<Word, long long>> torsion_witness;  // (g, order)
  std::size_t uncertified = 0;
};

CyclicGeometryReport uqc_estimate(BallIndex const& ball, long long power_cap);
CyclicGeometryReport umc_estimate(BallIndex const& ball, long long power_cap);

struct RootResult {
  Word root;
  long long exponent = 1;
  bool exhaustive = false;  // the scan covered every candidate up to length_cap
};
// Shortest (then shortlex-least) y with y^e = g for some 2 <= e <= exp_cap,
// taking the largest such e; (g, 1) when none is found. nullopt if g is longer
// than length_cap.
std::optional<RootResult> primitive_root(Word const& g, OraclePtr oracle, std::size_t length_cap, long long exp_cap);

}  // namespace cgt
