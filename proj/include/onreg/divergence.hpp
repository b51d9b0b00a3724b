#pragma once

// A class with finite online dimension but infinite entropy potential: at
// point x_k the class takes any of m_k = 2^(2^k) labels, pairwise a_k = 2^-k
// apart, independently across points. Truncating to K points gives the
// quantities below in closed form.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "onreg/finite_class.hpp"

namespace onreg {

struct DivergenceExample {
  std::size_t K = 0;
  std::vector<double> scales;              // a_1..a_K
  std::vector<std::uint64_t> label_counts;  // m_1..m_K
  /// integral of log2 N over [a_{K+1}, diam] = K - (1 - 2^-K).
  double phi_partial = 0.0;
  /// integral of log2 N over [0, diam] for the truncated class = K.
  double phi_truncated = 0.0;
  /// sum_k a_k = 1 - 2^-K, an upper bound on the online dimension.
  double donl_bound = 0.0;
};

/// Closed forms from the block structure (log2 N(eps) = sum of log2 m_k over
/// points whose scale exceeds eps). Throws ResourceError for K > 4.
DivergenceExample divergence_example(std::size_t K);

/// The truncated class as an explicit table (K <= 2 only: 64 rows at K = 2).
/// Labels are indices into a Custom loss whose blocks are ultrametric.
FiniteClass divergence_class(std::size_t K);

}  // namespace onreg
