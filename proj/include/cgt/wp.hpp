#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "cgt/abelian.hpp"
#include "cgt/coset_enum.hpp"
#include "cgt/presentation.hpp"

namespace cgt {

enum class Verdict { Trivial, Nontrivial, Unknown };
std::string to_string(Verdict v);

struct OracleStats {
  std::uint64_t queries = 0;
  std::uint64_t trivial = 0;
  std::uint64_t nontrivial = 0;
  std::uint64_t unknown = 0;
  std::uint64_t nodes = 0;
  // Largest observed (relator applications) / |w| over certified-trivial
  // queries: an empirical stand-in for the isoperimetric constant.
  double iso_constant = 0.0;
};

// Sound three-valued word-problem solver. Trivial / Nontrivial answers are
// never wrong; Unknown means a budget ran out. Safe for concurrent queries.
class WordProblemOracle {
 public:
  explicit WordProblemOracle(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  virtual ~WordProblemOracle() = default;
  WordProblemOracle(WordProblemOracle const&) = delete;
  WordProblemOracle& operator=(WordProblemOracle const&) = delete;

  Verdict query(Word const& w) const;
  Verdict equal(Word const& a, Word const& b) const { return query(a * invert(b)); }

  Alphabet const& alphabet() const noexcept { return alphabet_; }
  std::size_t rank() const noexcept { return alphabet_.size(); }

  // Never answers Unknown.
  virtual bool is_exact() const { return false; }
  // The group is known to be torsion-free.
  virtual bool is_torsion_free() const { return false; }
  // Abelianization of the underlying presentation, when one is attached.
  virtual AbelianLattice const* abelianization() const { return nullptr; }
  virtual std::string kind() const = 0;

  OracleStats stats() const;

 protected:
  virtual Verdict decide(Word const& w) const = 0;
  void add_nodes(std::uint64_t n) const { nodes_ += n; }
  void observe_iso(std::size_t moves, std::size_t length) const;

 private:
  Alphabet alphabet_;
  mutable std::atomic<std::uint64_t> queries_{0}, trivial_{0}, nontrivial_{0}, unknown_{0}, nodes_{0};
  mutable std::atomic<double> iso_{0.0};
};

using OraclePtr = std::shared_ptr<const WordProblemOracle>;

// ---- Dehn's algorithm ----------------------------------------------------

struct DehnResult {
  Word word;
  std::size_t steps = 0;
};

// Reusable Dehn reducer; construction checks C'(1/6) once.
class DehnReducer {
 public:
  // Throws Error("not C'(1/6)") when the check fails.
  explicit DehnReducer(Presentation const& p);
  DehnResult reduce(Word const& w) const;
  Rational lambda() const noexcept { return lambda_; }
  Presentation const& presentation() const noexcept { return presentation_; }

 private:
  Presentation presentation_;
  SymmetrizedClosure closure_;
  Rational lambda_;
  std::size_t min_half_ = 1;
  std::size_t max_len_ = 0;
};

// Repeatedly replaces a subword s that is more than half of a closure element
// r = s t^-1 by t. Throws when p is not C'(1/6).
Word dehn_reduce(Presentation const& p, Word const& w);

// ---- Oracle implementations ---------------------------------------------

class FreeOracle final : public WordProblemOracle {
 public:
  explicit FreeOracle(Alphabet a) : WordProblemOracle(std::move(a)) {}
  bool is_exact() const override { return true; }
  bool is_torsion_free() const override { return true; }
  std::string kind() const override { return "free"; }

 protected:
  Verdict decide(Word const& w) const override;
};

// For presentations that contain the commutator of every generator pair.
class AbelianOracle final : public WordProblemOracle {
 public:
  explicit AbelianOracle(Presentation const& p);
  bool is_exact() const override { return true; }
  bool is_torsion_free() const override { return lattice_.is_zero_lattice(); }
  AbelianLattice const* abelianization() const override { return &lattice_; }
  std::string kind() const override { return "abelian"; }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  AbelianLattice lattice_;
};

bool is_syntactically_abelian(Presentation const& p);

// Trivial HNN extension of a free abelian base: base generators B pairwise
// commute, and each stable letter t commutes with a subgroup H_t of Z^B.
struct HnnStructure {
  std::vector<long> base_index;     // generator -> coordinate in Z^B or -1
  std::vector<long> stable_index;   // generator -> stable letter number or -1
  std::vector<AbelianLattice> subgroups;
  std::size_t base_rank = 0;
};
std::optional<HnnStructure> recognize_trivial_hnn(Presentation const& p);

// Britton's lemma over a free abelian base: exact word problem.
class BrittonOracle final : public WordProblemOracle {
 public:
  BrittonOracle(Presentation const& p, HnnStructure s);
  bool is_exact() const override { return true; }
  bool is_torsion_free() const override { return true; }
  AbelianLattice const* abelianization() const override { return &lattice_; }
  std::string kind() const override { return "britton"; }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  HnnStructure hnn_;
  AbelianLattice lattice_;
};

class DehnOracle final : public WordProblemOracle {
 public:
  explicit DehnOracle(Presentation const& p);
  bool is_exact() const override { return true; }
  bool is_torsion_free() const override { return torsion_free_; }
  AbelianLattice const* abelianization() const override { return &lattice_; }
  std::string kind() const override { return "dehn"; }
  DehnReducer const& reducer() const noexcept { return reducer_; }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  DehnReducer reducer_;
  AbelianLattice lattice_;
  bool torsion_free_ = false;
};

struct BallOptions {
  std::size_t radius = 16;       // max intermediate word length
  std::size_t move_cap = 8;      // max relator applications
  std::size_t coset_cap = 4096;  // Todd-Coxeter budget; 0 disables
  std::size_t node_cap = 200000;
};

// Bounded rewriting search. Order of checks: abelianization filter, finite
// coset table (when enumeration closed within budget), bounded search.
class BallOracle final : public WordProblemOracle {
 public:
  BallOracle(Presentation const& p, BallOptions opts);
  bool is_exact() const override { return cosets_.has_value(); }
  AbelianLattice const* abelianization() const override { return &lattice_; }
  std::string kind() const override { return cosets_ ? "ball+cosets" : "ball"; }
  std::optional<std::size_t> finite_order() const {
    return cosets_ ? std::optional<std::size_t>(cosets_->order()) : std::nullopt;
  }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  Presentation presentation_;
  SymmetrizedClosure closure_;
  AbelianLattice lattice_;
  std::optional<CosetTable> cosets_;
  BallOptions opts_;
};

// G1 x G2 over the union alphabet (o1's generators first).
class ProductOracle final : public WordProblemOracle {
 public:
  ProductOracle(OraclePtr o1, OraclePtr o2);
  bool is_exact() const override { return first_->is_exact() && second_->is_exact(); }
  bool is_torsion_free() const override { return first_->is_torsion_free() && second_->is_torsion_free(); }
  std::string kind() const override { return "product(" + first_->kind() + "," + second_->kind() + ")"; }
  std::pair<Word, Word> project(Word const& w) const;
  OraclePtr const& first() const noexcept { return first_; }
  OraclePtr const& second() const noexcept { return second_; }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  OraclePtr first_, second_;
};

// Rewrites words of its own alphabet into the inner oracle's alphabet by a
// homomorphism that is injective on the group it models (renaming, Tietze
// deletion, subgroup inclusion).
class MappedOracle final : public WordProblemOracle {
 public:
  MappedOracle(Alphabet a, OraclePtr inner, std::function<Word(Word const&)> map, std::string label);
  bool is_exact() const override { return inner_->is_exact(); }
  bool is_torsion_free() const override { return inner_->is_torsion_free(); }
  std::string kind() const override { return label_ + "->" + inner_->kind(); }
  Word map(Word const& w) const { return map_(w); }
  OraclePtr const& inner() const noexcept { return inner_; }

 protected:
  Verdict decide(Word const& w) const override;

 private:
  OraclePtr inner_;
  std::function<Word(Word const&)> map_;
  std::string label_;
};

OraclePtr ball_oracle(Presentation const& p, std::size_t radius, std::size_t move_cap);
OraclePtr product_oracle(OraclePtr o1, OraclePtr o2);
// Same group under a renamed alphabet of equal size.
OraclePtr renamed_oracle(OraclePtr o, Alphabet a);

// Picks the strongest applicable solver: free, abelian, trivial HNN over a
// free abelian base, Dehn (C'(1/6)), else BallOracle.
OraclePtr make_oracle(Presentation const& p, BallOptions opts = {});

// ---- Orders -------------------------------------------------------------

struct Order {
  enum class Kind { Finite, InfiniteUpToBound, Unknown };
  Kind kind = Kind::Unknown;
  long long value = 0;  // k for Finite, cutoff for InfiniteUpToBound
  // InfiniteUpToBound backed by a proof (torsion-free group, or infinite
  // image in the abelianization).
  bool proven_infinite = false;

  bool finite() const { return kind == Kind::Finite; }
  bool infinite() const { return kind == Kind::InfiniteUpToBound; }
};
std::string to_string(Order const& o);

Order order_of(Word const& w, WordProblemOracle const& oracle, long long cutoff);

}  // namespace cgt
