#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kernels_detail.hpp"
#include "onreg/kernels.hpp"

namespace onreg::kernels {

namespace omp {

Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x) {
  double lower = 0.0;
  double upper = 1.0;
  const std::size_t d = anchors.d;
  const auto n = static_cast<std::int64_t>(anchors.size());
#pragma omp parallel for reduction(max : lower) reduction(min : upper) schedule(static)
  for (std::int64_t s = 0; s < n; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    const double dist = sup_norm_distance(anchors.xs.subspan(idx * d, d), x);
    lower = std::max(lower, anchors.ys[idx] - L * dist);
    upper = std::min(upper, anchors.ys[idx] + L * dist);
  }
  return {lower, upper};
}

double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid) {
  const auto cells = static_cast<std::int64_t>(grid.cell_count());
  double sum = 0.0;
#pragma omp parallel reduction(+ : sum)
  {
    std::vector<double> point(grid.d);
#pragma omp for schedule(static)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
      detail::cell_center(grid, static_cast<std::size_t>(cell), point.data());
      const Bounds b = serial::envelope_bounds(anchors, L, point);
      sum += std::pow(std::max(0.0, b.upper - b.lower), exponent);
    }
  }
  return sum * grid.cell_volume();
}

std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss) {
  std::vector<double> dist(rows * rows, 0.0);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t sa = 0; sa < n; ++sa) {
    const auto a = static_cast<std::size_t>(sa);
    for (std::size_t b = a + 1; b < rows; ++b) {
      double worst = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        worst = std::max(worst, loss(values[a * cols + j], values[b * cols + j]));
      }
      dist[a * rows + b] = worst;
      dist[b * rows + a] = worst;
    }
  }
  return dist;
}

std::optional<std::pair<std::size_t, std::size_t>> first_lipschitz_violation(
    const AnchorView& anchors, double L, double tol) {
  const std::size_t d = anchors.d;
  const auto n = static_cast<std::int64_t>(anchors.size());
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t best_i = kNone;
  std::size_t best_j = kNone;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    std::size_t current;
#pragma omp atomic read
    current = best_i;
    if (i > current) continue;
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      const double dist =
          sup_norm_distance(anchors.xs.subspan(i * d, d), anchors.xs.subspan(j * d, d));
      if (std::abs(anchors.ys[i] - anchors.ys[j]) > L * dist + tol) {
#pragma omp critical(onreg_lipschitz_violation)
        {
          if (i < best_i || (i == best_i && j < best_j)) {
            best_i = i;
            best_j = j;
          }
        }
        break;
      }
    }
  }
  if (best_i == kNone) return std::nullopt;
  return std::pair{best_i, best_j};
}

}  // namespace omp

namespace {

bool go_parallel(std::size_t work, std::size_t threshold) {
  return work >= threshold && !omp_in_parallel() && omp_get_max_threads() > 1;
}

}  // namespace

Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x) {
  if (go_parallel(anchors.size(), kParallelAnchorThreshold)) {
    return omp::envelope_bounds(anchors, L, x);
  }
  return serial::envelope_bounds(anchors, L, x);
}

double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid) {
  if (go_parallel(grid.cell_count(), kParallelCellThreshold)) {
    return omp::width_power_integral(anchors, L, exponent, grid);
  }
  return serial::width_power_integral(anchors, L, exponent, grid);
}

std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss) {
  if (go_parallel(rows * rows * cols, kParallelCellThreshold)) {
    return omp::sup_distance_matrix(values, rows, cols, loss);
  }
  return serial::sup_distance_matrix(values, rows, cols, loss);
}

std::optional<std::pair<std::size_t, std::size_t>> first_lipschitz_violation(
    const AnchorView& anchors, double L, double tol) {
  if (go_parallel(anchors.size() * anchors.size() / 2, kParallelAnchorThreshold)) {
    return omp::first_lipschitz_violation(anchors, L, tol);
  }
  return serial::first_lipschitz_violation(anchors, L, tol);
}

}  // namespace onreg::kernels
