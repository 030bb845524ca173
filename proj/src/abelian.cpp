#include "cgt/abelian.hpp"

#include <cstdlib>
#include <numeric>

namespace cgt {

AbelianLattice::AbelianLattice(Presentation const& p) : rank_(p.rank()) {
  std::vector<std::vector<long long>> rows;
  for (auto const& r : p.relators()) rows.push_back(exponent_sums(r, p.rank()));
  *this = AbelianLattice(p.rank(), rows);
}

AbelianLattice::AbelianLattice(std::size_t rank, std::vector<std::vector<long long>> const& input)
    : rank_(rank) {
  auto rows = input;
  std::size_t top = 0;
  for (std::size_t col = 0; col < rank_ && top < rows.size(); ++col) {
    // Euclid on column `col` among rows[top..].
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        long long q = rows[i][col] / rows[top][col];
        for (std::size_t c = 0; c < rank_; ++c) rows[i][c] -= q * rows[top][c];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t i = 0; i < top; ++i) {
      long long q = rows[i][col] / rows[top][col];
      if (rows[i][col] % rows[top][col] < 0) --q;
      for (std::size_t c = 0; c < rank_; ++c) rows[i][c] -= q * rows[top][c];
    }
    basis_.push_back(rows[top]);
    pivots_.push_back(col);
    ++top;
  }
}

bool AbelianLattice::contains(std::vector<long long> v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    long long piv = basis_[i][pivots_[i]];
    long long x = v[pivots_[i]];
    if (x % piv != 0) return false;
    long long q = x / piv;
    for (std::size_t c = 0; c < rank_; ++c) v[c] -= q * basis_[i][c];
  }
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

std::optional<long long> AbelianLattice::order(std::vector<long long> const& v) const {
  std::vector<Rational> rest(v.begin(), v.end());
  long long denom_lcm = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Rational coeff = rest[pivots_[i]] / Rational(basis_[i][pivots_[i]]);
    if (coeff.numerator() == 0) continue;
    for (std::size_t c = 0; c < rank_; ++c) rest[c] -= coeff * Rational(basis_[i][c]);
    denom_lcm = std::lcm(denom_lcm, coeff.denominator());
  }
  for (auto const& x : rest)
    if (x.numerator() != 0) return std::nullopt;
  return denom_lcm;
}

std::vector<long long> AbelianLattice::canonical(std::vector<long long> v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    long long piv = basis_[i][pivots_[i]];
    long long x = v[pivots_[i]];
    long long q = x / piv;
    if (x % piv < 0) --q;
    if (q == 0) continue;
    for (std::size_t c = 0; c < rank_; ++c) v[c] -= q * basis_[i][c];
  }
  return v;
}

std::vector<Rational> AbelianLattice::residual(std::vector<long long> const& v) const {
  std::vector<Rational> rest(v.begin(), v.end());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Rational coeff = rest[pivots_[i]] / Rational(basis_[i][pivots_[i]]);
    if (coeff.numerator() == 0) continue;
    for (std::size_t c = 0; c < rank_; ++c) rest[c] -= coeff * Rational(basis_[i][c]);
  }
  return rest;
}

}  // namespace cgt
