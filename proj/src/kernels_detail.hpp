#pragma once

#include <cstddef>

#include "onreg/kernels.hpp"

namespace onreg::kernels::detail {

// Shared by both backends so the per-point arithmetic is identical.
inline void cell_center(const GridSpec& grid, std::size_t cell, double* out) {
  const double h = 2.0 / static_cast<double>(grid.resolution);
  for (std::size_t i = 0; i < grid.d; ++i) {
    const std::size_t k = cell % grid.resolution;
    cell /= grid.resolution;
    out[i] = -1.0 + (static_cast<double>(k) + 0.5) * h;
  }
}

}  // namespace onreg::kernels::detail
