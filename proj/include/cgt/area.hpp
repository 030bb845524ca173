#pragma once

#include <map>
#include <mutex>
#include <unordered_map>

#include "cgt/cyclics.hpp"
#include "cgt/rewrite.hpp"
#include "cgt/wp.hpp"

namespace cgt {

struct AreaFactor {
  Word theta;
  Word rho;  // element of the symmetrized closure
};

// w = prod_i theta_i^-1 rho_i theta_i in the free group.
struct AreaDecomposition {
  std::vector<AreaFactor> factors;
  std::size_t noise = 0;
  std::size_t area() const noexcept { return factors.size(); }
};

// sum_{i=0..M} |theta_i theta_{i+1}^-1| with theta_0 = theta_{M+1} = 1.
std::size_t decomposition_noise(std::vector<AreaFactor> const& factors);
Word decomposition_product(std::vector<AreaFactor> const& factors);

// Product reduces to w, every rho lies in the closure and the stored noise is
// the recomputed one.
bool verify_decomposition(Word const& w, AreaDecomposition const& d, SymmetrizedClosure const& closure);
bool verify_decomposition(Word const& w, AreaDecomposition const& d, Presentation const& p);

// Re-chooses the rotation of each rho (with the matching conjugator) to
// minimise noise; the product is unchanged.
AreaDecomposition minimize_noise(AreaDecomposition const& d);

struct AreaCaps {
  std::size_t length_cap = 0;  // 0: |w| + 2L + 4
  std::size_t area_cap = 32;
  std::size_t state_cap = 2000000;
};

struct AreaResult {
  enum class Status { Exact, UpperBound, Exhausted };
  Status status = Status::Exhausted;
  std::size_t area = 0;          // best M found (Exact / UpperBound)
  std::size_t lower_bound = 0;   // proven: Area(w) >= lower_bound
  std::optional<AreaDecomposition> certificate;
  bool noise_within_bound = false;  // noise <= M L + |w| after minimisation
  std::size_t states = 0;
  std::size_t length_cap_used = 0;
  bool closed = false;  // whole reachable space explored: w is not null-homotopic

  bool found() const noexcept { return status != Status::Exhausted; }
  bool exact() const noexcept { return status == Status::Exact; }
};
std::string to_string(AreaResult::Status s);

// Breadth-first relator-application search. The j-th word on an m-move path
// from w to 1 has length at most min(|w| + jL, (m - j)L), so once every path
// shorter than the best one fits under a fully searched length cap, the best
// one is the true area.
class AreaSolver {
 public:
  explicit AreaSolver(Presentation p);
  AreaResult solve(Word const& w, AreaCaps caps = {}) const;
  Presentation const& presentation() const noexcept { return presentation_; }
  SymmetrizedClosure const& closure() const noexcept { return closure_; }

 private:
  struct Run {
    std::optional<std::vector<Move>> path;  // moves from w to 1
    std::vector<Word> words;                // words along the path
    std::size_t full_depth = 0;             // depths fully explored without success
    bool budget_hit = false;
    bool closed = false;
    std::size_t states = 0;
  };
  Run bfs(Word const& w, std::size_t length_cap, std::size_t depth_limit, std::size_t state_cap) const;

  Presentation presentation_;
  SymmetrizedClosure closure_;
  std::size_t L_ = 0;
};

AreaResult area(Presentation const& p, Word const& w, AreaCaps caps = {});

// ---- function tables ----------------------------------------------------

enum class Exactness { Exact, LowerBound, BudgetExhausted };
std::string to_string(Exactness e);
// The weaker of two flags.
Exactness weaker(Exactness a, Exactness b);

struct Sample {
  long long n = 0;
  long long value = 0;
  Exactness exactness = Exactness::Exact;
  std::string witness;
};

struct FunctionTable {
  std::string name;
  std::vector<Sample> samples;
  std::map<std::string, long long> budget;
};

enum class PairConvention { Sum, Max };  // |w|+|u| <= n or max(|w|,|u|) <= n
enum class CyclicsVariant { C, Z, O };

struct FunctionCaps {
  AreaCaps area;
  long long order_cutoff = 32;  // also the scan range for p when no bound is certified
  std::size_t ball_radius_slack = 0;
  PairConvention convention = PairConvention::Sum;
};

// Shared state for sampling functions over one presentation: memoised areas
// keyed by cyclic-conjugacy class (area is invariant under cyclic permutation
// and inversion).
class FunctionContext {
 public:
  FunctionContext(Presentation p, OraclePtr oracle, FunctionCaps caps);
  Presentation const& presentation() const noexcept { return solver_.presentation(); }
  WordProblemOracle const& oracle() const noexcept { return *oracle_; }
  OraclePtr const& oracle_ptr() const noexcept { return oracle_; }
  FunctionCaps const& caps() const noexcept { return caps_; }
  AreaResult const& area_of(Word const& w);
  Order const& order_of(Word const& u);
  BallIndex const& ball(std::size_t radius);

 private:
  AreaSolver solver_;
  OraclePtr oracle_;
  FunctionCaps caps_;
  std::mutex mu_;
  std::unordered_map<Word, AreaResult> areas_;
  std::unordered_map<Word, Order> orders_;
  std::map<std::size_t, std::unique_ptr<BallIndex>> balls_;
};

// All freely reduced words of length exactly n, in shortlex order.
std::vector<Word> words_of_length(std::size_t rank, std::size_t n);
// Minimal word among the cyclic permutations of the cyclic reduction of w and
// of its inverse.
Word cyclic_canonical(Word const& w);

Sample dehn_function(FunctionContext& ctx, long long n);
Sample rel_cyclics_family(FunctionContext& ctx, long long n, CyclicsVariant variant);
Sample return_of_cyclics(FunctionContext& ctx, long long n);
Sample torsion_evolution(FunctionContext& ctx, long long n);

// Samples n = 1..max_n for fn in {delta, delta_c, delta_z, delta_o, frak_m, frak_t}.
FunctionTable function_table(FunctionContext& ctx, std::string const& fn, long long max_n, unsigned workers = 1);

}  // namespace cgt
