#pragma once

#include <optional>
#include <vector>

#include "cgt/presentation.hpp"

namespace cgt {

// Regular representation of a finite group found by Todd-Coxeter coset
// enumeration over the trivial subgroup (HLT strategy with coincidences).
class CosetTable {
 public:
  // nullopt if more than `max_cosets` cosets get defined.
  static std::optional<CosetTable> enumerate(Presentation const& p, std::size_t max_cosets);

  std::size_t order() const noexcept { return rows_.size(); }
  std::size_t act(std::size_t coset, Word const& w) const;
  bool is_identity(Word const& w) const { return act(0, w) == 0; }

 private:
  std::vector<std::vector<std::size_t>> rows_;  // rows_[coset][letter code]
};

}  // namespace cgt
