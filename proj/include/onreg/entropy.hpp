#pragma once

// Covering numbers, entropy potentials, scaled trees and the online dimension
// of explicit finite classes.

#include <cstddef>
#include <string>
#include <vector>

#include "onreg/finite_class.hpp"
#include "onreg/rng.hpp"
#include "onreg/row_set.hpp"
#include "onreg/set_cover.hpp"

namespace onreg {

struct CoverOptions {
  /// Restrict centres to the subset itself instead of the whole class.
  bool centers_from_subset = false;
  /// Subsets up to this size are always solved exactly; larger ones use greedy
  /// with a packing certificate and fall back to a budgeted exact search.
  std::size_t exact_limit = 24;
};

/// N(U, eps) = min |S|, S a set of centres, with every u in U within
/// distance eps of some centre. Throws DomainError for an empty subset.
CoverResult covering_number(const FiniteClass& cls, const RowSet& subset, double eps,
                            const CoverOptions& options = {});

struct CoverStep {
  double from = 0.0;  // N is constant on [from, to)
  double to = 0.0;
  std::size_t count = 1;
  bool exact = true;
};

/// N(U, .) as a step function on [0, diam(H)]; steps start at 0 and at the
/// class's pairwise distance levels.
std::vector<CoverStep> covering_profile(const FiniteClass& cls, const RowSet& subset,
                                        const CoverOptions& options = {});

struct PotentialResult {
  double value = 0.0;
  bool exact = true;
};

/// Phi(U) = integral over [0, diam(H)] of log2 N(U, eps), exact over the
/// step function.
PotentialResult entropy_potential(const FiniteClass& cls, const RowSet& subset,
                                  const CoverOptions& options = {});
/// Same integrand restricted to [from, to] (clamped to [0, diam(H)]).
PotentialResult entropy_integral(const FiniteClass& cls, const RowSet& subset, double from,
                                 double to, const CoverOptions& options = {});

/// Internal node of a scaled tree: query point and the two edge labels.
struct NodeQuery {
  std::size_t x = 0;
  double s0 = 0.0;
  double s1 = 0.0;
};

struct SplitViolation {
  double eps = 0.0;
  std::size_t parent = 0;
  std::size_t child0 = 0;
  std::size_t child1 = 0;
};

struct SplitReport {
  double gap = 0.0;
  /// gamma / (2c): only grid points strictly below are tested.
  double limit = 0.0;
  std::size_t tested = 0;
  std::vector<SplitViolation> violations;
};

/// `count` evenly spaced scales in (0, gap / (2c)).
std::vector<double> admissible_eps_grid(double gap, double c, std::size_t count);

/// Checks N(U, eps) >= N(U_0, eps) + N(U_1, eps) for every grid eps below
/// gap/(2c), U_b = {h in U : h(x) = s_b}. Throws PreconditionError when a
/// child version space is empty.
SplitReport check_cover_split(const FiniteClass& cls, const RowSet& subset, const NodeQuery& node,
                              const std::vector<double>& eps_grid);

/// Complete binary tree; nodes in level order (children of i at 2i+1, 2i+2).
struct ScaledTree {
  std::size_t depth = 0;
  std::vector<NodeQuery> nodes;

  /// Nested {x, s0, s1, children: [left, right]}; the JSON for depth 0 is null.
  std::string to_json() const;
  static ScaledTree from_json(std::string_view text);
};

/// Every branch prefix is consistent with some row of the class.
bool tree_realizable(const FiniteClass& cls, const ScaledTree& tree);

struct DescentResult {
  std::vector<int> branch;
  double gap_sum = 0.0;
  /// Phi of the version space at the root and after every step.
  std::vector<double> potential_trace;
};

/// Walks from the root choosing a child whose potential drops by at least
/// gap/(4c) (child 0 when both do). Throws PreconditionError when the tree is
/// not realizable along the walk and std::logic_error if no child drops.
DescentResult greedy_branch_descent(const FiniteClass& cls, const ScaledTree& tree,
                                    double tol = 1e-9);

/// Exact sup over realizable trees of depth <= max_depth (<= 4) of the
/// minimum branch gap sum, with edge labels drawn from the class's values.
/// Throws ResourceError (carrying the value for the deepest completed depth)
/// when more than `budget` version-space states are evaluated.
double online_dim_lower_bound(const FiniteClass& cls, std::size_t max_depth,
                              std::size_t budget = 5'000'000);

/// All four {0,1}-valued functions on two points under absolute loss.
FiniteClass cube_class();
/// All {0,1}-valued functions on the (2L)^d points of a 1/L-separated grid in
/// [-1,1]^d, under absolute loss. Needs 2L integral and (2L)^d <= 4.
FiniteClass separated_grid_class(double L, std::size_t d);
/// n rows, m points, values drawn from `levels` evenly spaced labels in [0,1].
FiniteClass random_finite_class(Rng& rng, std::size_t n, std::size_t m, const Loss& loss,
                                std::size_t levels = 4);
/// Random realizable tree of the given depth over the class (greedy choice of
/// informative nodes; shallower if the class runs out of splits).
ScaledTree random_realizable_tree(Rng& rng, const FiniteClass& cls, std::size_t depth);

}  // namespace onreg
