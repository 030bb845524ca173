#pragma once

#include "cgt/fibre.hpp"

namespace cgt {

// ---- conjugacy in a group -----------------------------------------------

struct ConjugacySearch {
  enum class Status { Found, NotFound, Unknown };
  Status status = Status::Unknown;
  Word conjugator;  // gamma with gamma^-1 u gamma = v, when Found
};
std::string to_string(ConjugacySearch::Status s);

// Scans the ball by increasing length (shortlex within a length). NotFound
// means no conjugator of length <= radius and every comparison was certified.
ConjugacySearch conjugacy_search(BallIndex const& ball, Word const& u, Word const& v);
ConjugacySearch conjugacy_search(OraclePtr oracle, Word const& u, Word const& v, std::size_t radius);

// True when u and v are certainly not conjugate at any length: distinct
// abelianization classes, distinct cyclic words in a free group, or an
// exhaustive search over a ball that is the whole group.
bool certified_non_conjugate(WordProblemOracle const& oracle, Word const& u, Word const& v,
                             BallIndex const* whole_group = nullptr);

// ---- conjugacy in the fibre product -------------------------------------

struct PConjugacySearch {
  ConjugacySearch::Status status = ConjugacySearch::Status::Unknown;
  Word p_word;  // conjugator as a P-word
};
// Minimal-length P-conjugator of (u1,u2) to (v1,v2) within the P-ball.
PConjugacySearch p_conjugacy_search(PBall const& ball, Word const& u1, Word const& u2, Word const& v1,
                                    Word const& v2);

// ---- conjugator length tables -------------------------------------------

enum class CLFlavor { G, P, Rel };
std::string to_string(CLFlavor f);
CLFlavor parse_cl_flavor(std::string const& s);

struct CLCaps {
  std::size_t conjugator_radius = 4;  // conjugators searched up to this length
  PairConvention convention = PairConvention::Sum;
  std::size_t max_elements = 400000;
  unsigned workers = 1;
};

struct CLSample {
  Sample sample;
  CLFlavor flavor = CLFlavor::G;
  Word u1, u2, v1, v2;  // G flavor uses u1, v1 only
  Word conjugator;      // G-word (G flavor) or P-word
  std::size_t pairs = 0;
  std::size_t uncertified_pairs = 0;
};

CLSample cl_g(OraclePtr oracle, long long n, CLCaps caps = {});
CLSample cl_p(FibreSystem const& sys, long long n, CLFlavor flavor, CLCaps caps = {});

// ---- the constructive conjugator ----------------------------------------

struct ConjugatorCaps {
  std::size_t g_radius = 6;       // G-conjugacy search radius
  std::size_t root_length = 6;    // primitive-root search length
  long long root_exponent = 6;
  long long q_cap = 8;            // |q1|, |q2| <= q_cap in the exponent scan
  long long order_cutoff = 32;
  AreaCaps area;
  std::optional<std::pair<long long, long long>> seed;  // (q1, q2) tried first
};

struct ConjugatorCertificate {
  Word u1, u2, v1, v2;
  Word zeta;  // P-word conjugating U to V
  std::string stage = "start";
  bool ok = false;
  bool diagonal_case = false;
  Word g;       // g^-1 u2 g = v2
  Word gamma;   // gamma^-1 u1 gamma = g v1 g^-1
  Word y1, y2;
  long long e1 = 1, e2 = 1;
  long long q1 = 0, q2 = 0, p = 0, r2 = 0, p_prime = 0, p_final = 0;
  std::optional<long long> omega;
  bool torsion_step = false;
  Verdict conjugates = Verdict::Unknown;
  Verdict member = Verdict::Unknown;
  std::size_t area_steps = 0;
};

ConjugatorCertificate construct_P_conjugator(Word const& u1, Word const& u2, Word const& v1, Word const& v2,
                                             FibreSystem const& sys, ConjugatorCaps caps = {});

struct HardInstance {
  Word a, gamma;
  Word u1, u2, v1, v2;
  Word u_p_word, v_p_word;  // spelled P-words
  std::optional<std::size_t> u_p_length, v_p_length;  // geodesic, inside the P-ball
  std::size_t bound = 0;  // 2n + 2
  bool bound_holds = false;
  Exactness exactness = Exactness::Exact;
};
HardInstance hard_conjugacy_instance(FibreSystem const& sys, long long n, DistortionCaps caps = {});

// True when z conjugates (a,a) to (gamma^-1 a gamma, a) and has the form
// (a0^p gamma, a0^q) for a generator a0 of the centraliser of a; p and q are
// searched in [-cap, cap].
struct CentraliserForm {
  Verdict holds = Verdict::Unknown;
  long long p = 0, q = 0;
};
CentraliserForm centraliser_form(Word const& z1, Word const& z2, HardInstance const& h, FibreSystem const& sys,
                                 long long cap);

// ---- cyclic sub-semigroups ----------------------------------------------

struct SemigroupMembership {
  enum class Kind { Member, NonMember, Unknown };
  Kind kind = Kind::Unknown;
  long long p = 0;
};
std::string to_string(SemigroupMembership::Kind k);

// Least p in 1..rho with x = y^p. NonMember only when every comparison was
// certified and rho_valid says rho bounds p for this instance.
SemigroupMembership cyclic_semigroup_membership(Word const& x, Word const& y, WordProblemOracle const& oracle,
                                                long long rho, bool rho_valid);

}  // namespace cgt
