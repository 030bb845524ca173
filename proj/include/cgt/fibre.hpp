#pragma once

#include <functional>
#include <map>
#include <tuple>

#include "cgt/area.hpp"

namespace cgt {

// Fibre product P = {(g1, g2) : g1 = g2 in Q} of G -> Q = <X | R u A>,
// generated by (a,1) for a in A and (x,x) for x in X.
class FibreSystem {
 public:
  FibreSystem(Presentation g, std::vector<std::size_t> a, BallOptions ball = {});

  Presentation const& G() const noexcept { return g_; }
  Presentation const& Q() const noexcept { return q_; }
  Presentation const& GxG() const noexcept { return gg_; }
  std::vector<std::size_t> const& A() const noexcept { return a_; }
  // Letters 0..|A|-1 are (a,1); letters |A|+x are (x,x).
  Alphabet const& p_gens() const noexcept { return p_gens_; }
  std::size_t q_max_relator_length() const noexcept { return q_.max_relator_length(); }

  // Q after Tietze deletion of A: generators X \ A, relators T with A erased.
  Presentation const& Qbar() const noexcept { return qbar_; }
  AreaSolver const& qbar_solver() const noexcept { return qbar_solver_; }

  OraclePtr const& g_oracle() const noexcept { return g_oracle_; }
  OraclePtr const& q_oracle() const noexcept { return q_oracle_; }
  OraclePtr const& gg_oracle() const noexcept { return gg_oracle_; }
  AreaSolver const& q_solver() const noexcept { return q_solver_; }

  // P-word -> word over the G x G alphabet.
  Word transcribe(Word const& p_word) const;
  // Coordinates of a P-word as elements of G.
  std::pair<Word, Word> coordinates(Word const& p_word) const;
  // (g1, g2) as a word over the G x G alphabet.
  Word embed(Word const& g1, Word const& g2) const;
  // P-word (x,x)-letters spelling g.
  Word diagonal(Word const& g) const;
  Letter a_letter(std::size_t a_index) const { return Letter::make(a_index); }
  std::optional<std::size_t> a_index_of(std::size_t gen) const;

  // w = stripped * c in the free group, where stripped is w with its
  // A-letters erased and p_word spells (c, 1) as a product of
  // diag(v)^-1 (a,1)^+-1 diag(v).
  struct Split {
    Word stripped;
    Word p_word;
  };
  Split split_a(Word const& w) const;

  // P-word for (n, 1) with n in N: A-letters are split off, the rest is
  // certified trivial over Qbar and each relator factor is replaced by the
  // P-word of its A-erased relator. nullopt when the Qbar area search fails.
  std::optional<Word> kernel_p_word(Word const& n, AreaCaps caps = {}, AreaResult* area = nullptr) const;

 private:
  struct RelatorLift {
    Word prefix;  // Qbar relator = prefix^-1 tbar prefix, over G letters
    Word e;       // P-word for (tbar, 1)
  };
  Word to_qbar(Word const& w) const;
  Word from_qbar(Word const& w) const;

  Presentation g_, q_, gg_, qbar_;
  std::vector<std::size_t> a_;
  std::vector<std::size_t> kept_;
  std::vector<long> to_kept_;
  std::vector<RelatorLift> lifts_;
  // rho -> (relator, inverted, rotation)
  std::map<Word, std::tuple<std::size_t, bool, std::size_t>, ShortlexLess> closure_index_;
  AreaSolver qbar_solver_;
  Alphabet p_gens_;
  OraclePtr g_oracle_, q_oracle_, gg_oracle_;
  AreaSolver q_solver_;
};

// Throws Error for names outside G's alphabet.
FibreSystem make_fibre_system(Presentation const& g, std::vector<std::string> const& a_names, BallOptions ball = {});

Verdict p_membership(Word const& g1, Word const& g2, FibreSystem const& sys);

// Ball in P's Cayley graph, deduplicated by G x G oracle equality.
class PBall {
 public:
  struct Entry {
    Word p_word;
    Word g1, g2;
    std::size_t length = 0;
  };
  static PBall build(FibreSystem const& sys, std::size_t radius, std::size_t max_elements = 400000);
  bool complete() const noexcept { return complete_; }
  std::size_t radius() const noexcept { return radius_; }
  FibreSystem const& system() const noexcept { return *sys_; }
  std::vector<Entry> const& elements() const noexcept { return entries_; }
  // Entry equal to (g1, g2), if inside the ball.
  Entry const* find(Word const& g1, Word const& g2) const;

 private:
  std::vector<long long> key(Word const& g1, Word const& g2) const;
  FibreSystem const* sys_ = nullptr;
  std::size_t radius_ = 0;
  bool complete_ = true;
  std::vector<Entry> entries_;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
  std::optional<AbelianLattice> lattice_;
  bool free_ = false;
};

// Geodesic P-length; nullopt outside the ball. Throws Error for non-members.
std::optional<std::size_t> p_length(Word const& g1, Word const& g2, FibreSystem const& sys, PBall const& ball);
std::optional<std::size_t> p_length(Word const& g1, Word const& g2, FibreSystem const& sys, std::size_t radius_cap);

struct LiftResult {
  Word p_word;
  std::size_t area_before = 0;  // M
  std::size_t area_after = 0;   // M' (A-factors kept)
  std::size_t noise_after = 0;
  std::size_t bound = 0;        // (L+1) M' + |w| with L the longest relator of Q
  bool within_bound = false;
  Verdict verified = Verdict::Unknown;  // P-word equals (w, 1) in G x G
};

// Deletes factors whose relator comes from R, then spells the rest as
// diag(theta_1)^-1 (a_1,1) diag(theta_1 theta_2^-1) ... (a_M',1) diag(theta_M').
// Throws Error if d is not a valid certificate for w over Q.
LiftResult lift_area_certificate(Word const& w, AreaDecomposition const& d, FibreSystem const& sys);

// P-word for (g1, g2): diag(g2) followed by kernel_p_word(g2^-1 g1). nullopt
// if the area search over Qbar found no certificate.
struct PairLift {
  Word p_word;
  AreaResult area;  // of the A-erased word over Qbar
};
std::optional<PairLift> lift_pair(Word const& g1, Word const& g2, FibreSystem const& sys, AreaCaps caps = {});

struct DistortionCaps {
  std::size_t p_radius = 8;
  std::size_t max_elements = 400000;
};

Sample distortion(FibreSystem const& sys, long long n, DistortionCaps caps = {});

struct DistortionWitness {
  Word gamma;
  std::optional<std::size_t> p_len;  // nullopt: beyond the P-ball
  Exactness exactness = Exactness::Exact;
};
// gamma in N with |gamma|_G <= n maximising |(gamma,1)|_P. With `keep`, only
// candidates accepted by it are considered.
DistortionWitness hard_distortion_witness(FibreSystem const& sys, long long n, DistortionCaps caps = {},
                                          std::function<bool(Word const&)> const& keep = {});

}  // namespace cgt
