#pragma once

#include <optional>
#include <vector>

#include "cgt/presentation.hpp"

namespace cgt {

// The abelianization Z^rank / L, where L is spanned by relator exponent-sum
// vectors. Stores a Hermite-style echelon basis of L.
class AbelianLattice {
 public:
  AbelianLattice() = default;
  explicit AbelianLattice(Presentation const& p);
  AbelianLattice(std::size_t rank, std::vector<std::vector<long long>> const& rows);

  std::size_t rank() const noexcept { return rank_; }
  bool is_zero_lattice() const noexcept { return basis_.empty(); }

  // v in L, i.e. the class of v is trivial.
  bool contains(std::vector<long long> v) const;
  // Order of the class of v; nullopt for infinite order.
  std::optional<long long> order(std::vector<long long> const& v) const;
  // v in L (x) Q; equivalently the class of v has finite order.
  bool in_rational_span(std::vector<long long> const& v) const { return order(v).has_value(); }
  // Canonical representative of v + L: pivot coordinates reduced into [0, pivot).
  std::vector<long long> canonical(std::vector<long long> v) const;
  // Image of v in Q^rank / (L (x) Q), as a vector with zero pivot coordinates.
  std::vector<Rational> residual(std::vector<long long> const& v) const;

 private:
  std::size_t rank_ = 0;
  std::vector<std::vector<long long>> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace cgt
