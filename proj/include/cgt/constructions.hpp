#pragma once

#include <cstdint>

#include "cgt/presentation.hpp"

namespace cgt {

// ---- Rips construction --------------------------------------------------

struct RipsCertificate {
  Presentation q, g;
  std::string a_name, b_name;  // kernel generators
  std::size_t word_length = 0;
  std::size_t attempts = 0;
  std::string tail_scheme;
  std::size_t relator_count = 0;
  std::size_t expected_count = 0;  // 4|X| + |R|
  Rational lambda{0};
  bool c6 = false;
  bool retraction = false;  // killing a, b gives back R
  std::string asphericity = "unchecked";
  bool ok() const noexcept { return relator_count == expected_count && c6 && retraction; }
};

struct RipsResult {
  Presentation g;
  std::vector<std::size_t> a;  // indices of a, b in g
  RipsCertificate certificate;
};

// Tails: consecutive length-L segments of the shortest binary de Bruijn
// sequence covering all 4|X| + |R| slots, so every common subword of two
// tails is shorter than its order. L doubles on a failed certificate until
// max_word_length; Error past that.
RipsResult rips(Presentation const& q, std::size_t word_length = 16, std::size_t max_word_length = 1u << 14);

// Binary de Bruijn sequence of order m, linearised (length 2^m + m - 1).
std::vector<bool> de_bruijn(std::size_t m);
// Positive {a,b}-tails: false = a, true = b.
std::vector<std::vector<bool>> rips_tails(std::size_t count, std::size_t word_length);

// Deleting the generators `killed` and comparing relators as cyclic words up
// to inversion: true when the result is exactly `expected`.
bool retracts_to(Presentation const& p, std::vector<std::size_t> const& killed, Presentation const& expected);

// Random products of 1..max_factors conjugates of relators (conjugators of
// length <= conj_length), fed to Dehn's algorithm. Returns how many failed
// to reduce to the empty word. Deterministic in seed.
std::size_t null_product_smoke(Presentation const& g, std::size_t count, std::uint64_t seed,
                               std::size_t max_factors = 3, std::size_t conj_length = 3);

// ---- trivial HNN extension ----------------------------------------------

struct HnnResult {
  Presentation p;
  std::size_t t = 0;  // index of the stable letter
};
// Adds a stable letter (named t, or t1, t2, ... on a clash) and [t, h] for each h.
HnnResult trivial_hnn(Presentation const& gamma, std::vector<Word> const& h_gens, std::string const& t_name = "t");

// ---- dagger -------------------------------------------------------------

struct DaggerResult {
  Presentation qd;
  RipsCertificate rips;
  Presentation gg;
  std::vector<Word> s_p;  // P generators over the G x G alphabet
  std::vector<std::string> s_p_names;
  std::size_t t = 0;
  std::size_t relator_count = 0, expected_count = 0;  // |T~| + |S_P|
  bool kill_t = false;      // deleting t gives G x G exactly
  bool kill_chain = false;  // then the second factor, then {a, b}: Q
  std::vector<std::string> stages;
  bool ok() const noexcept { return rips.ok() && relator_count == expected_count && kill_t && kill_chain; }
};
DaggerResult dagger(Presentation const& q, std::size_t word_length = 16, std::size_t max_word_length = 1u << 14);

}  // namespace cgt
