#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "onreg/row_set.hpp"

namespace onreg {

struct CoverResult {
  std::size_t size = 0;
  /// False when `size` is only an upper bound (greedy without a matching
  /// certificate).
  bool exact = true;
  /// Indices into the candidate list.
  std::vector<std::size_t> chosen;
};

/// Repeatedly takes the candidate covering the most uncovered elements
/// (lowest index on ties). Throws PreconditionError if some element of
/// `universe` lies in no candidate.
CoverResult greedy_set_cover(const std::vector<RowSet>& sets, const RowSet& universe);

/// Size of a greedily built set of universe elements no two of which share a
/// candidate; a lower bound on any cover.
std::size_t packing_lower_bound(const std::vector<RowSet>& sets, const RowSet& universe);

/// Minimum cover by branch and bound: branch on the uncovered element with the
/// fewest covering candidates, prune with ceil(|uncovered| / best coverage).
/// Returns nullopt when more than `node_budget` search nodes would be needed.
std::optional<CoverResult> exact_set_cover(const std::vector<RowSet>& sets, const RowSet& universe,
                                           std::size_t node_budget = 50'000'000);

}  // namespace onreg
