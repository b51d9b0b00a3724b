#include "onreg/divergence.hpp"

#include <cmath>

#include "onreg/errors.hpp"

namespace onreg {

DivergenceExample divergence_example(std::size_t K) {
  if (K < 1) throw DomainError("truncation must be at least 1");
  if (K > 4) {
    throw ResourceError("truncation above 4 needs more than 2^16 labels per point",
                        divergence_example(4).phi_partial);
  }
  DivergenceExample ex;
  ex.K = K;
  for (std::size_t k = 1; k <= K; ++k) {
    ex.scales.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    ex.label_counts.push_back(std::uint64_t{1} << (std::uint64_t{1} << k));
  }
  // On [a_{j+1}, a_j) the points x_1..x_j are resolved, so
  // log2 N = sum_{k<=j} 2^k; integrate each block's contribution.
  const double floor_scale = std::ldexp(1.0, -static_cast<int>(K) - 1);
  for (std::size_t k = 1; k <= K; ++k) {
    const double bits = std::log2(static_cast<double>(ex.label_counts[k - 1]));
    ex.phi_partial += bits * (ex.scales[k - 1] - floor_scale);
    ex.phi_truncated += bits * ex.scales[k - 1];
    ex.donl_bound += ex.scales[k - 1];
  }
  return ex;
}

FiniteClass divergence_class(std::size_t K) {
  if (K < 1) throw DomainError("truncation must be at least 1");
  if (K > 2) throw ResourceError("explicit divergence class is limited to K <= 2", 0.0);
  const DivergenceExample ex = divergence_example(K);
  std::vector<std::size_t> offset;
  std::size_t labels = 0;
  for (auto m : ex.label_counts) {
    offset.push_back(labels);
    labels += static_cast<std::size_t>(m);
  }
  auto block_of = [&](std::size_t label) {
    std::size_t b = 0;
    while (b + 1 < offset.size() && label >= offset[b + 1]) ++b;
    return b;
  };
  // Same block: a_k between distinct labels. Across blocks the larger scale,
  // which keeps the table an ultrametric (c = 1).
  std::vector<std::vector<double>> table(labels, std::vector<double>(labels, 0.0));
  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t j = 0; j < labels; ++j) {
      if (i == j) continue;
      table[i][j] = ex.scales[std::min(block_of(i), block_of(j))];
    }
  }
  std::vector<std::vector<double>> rows = {{}};
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : rows) {
      for (std::uint64_t v = 0; v < ex.label_counts[k]; ++v) {
        auto row = prefix;
        row.push_back(static_cast<double>(offset[k] + v));
        next.push_back(std::move(row));
      }
    }
    rows = std::move(next);
  }
  return FiniteClass(std::move(rows), Loss::custom(std::move(table), 1.0));
}

}  // namespace onreg
