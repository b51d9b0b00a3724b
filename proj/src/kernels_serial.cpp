#include <algorithm>
#include <cmath>

#include "kernels_detail.hpp"
#include "onreg/kernels.hpp"

namespace onreg::kernels {

double sup_norm_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dist = std::max(dist, std::abs(a[i] - b[i]));
  return dist;
}

std::size_t GridSpec::cell_count() const noexcept {
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) n *= resolution;
  return n;
}

double GridSpec::cell_volume() const noexcept {
  return std::pow(2.0 / static_cast<double>(resolution), static_cast<double>(d));
}

namespace serial {

Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x) {
  double lower = 0.0;
  double upper = 1.0;
  const std::size_t d = anchors.d;
  for (std::size_t s = 0; s < anchors.size(); ++s) {
    const double dist = sup_norm_distance(anchors.xs.subspan(s * d, d), x);
    lower = std::max(lower, anchors.ys[s] - L * dist);
    upper = std::min(upper, anchors.ys[s] + L * dist);
  }
  return {lower, upper};
}

double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid) {
  std::vector<double> point(grid.d);
  double sum = 0.0;
  const std::size_t cells = grid.cell_count();
  for (std::size_t cell = 0; cell < cells; ++cell) {
    detail::cell_center(grid, cell, point.data());
    const Bounds b = serial::envelope_bounds(anchors, L, point);
    sum += std::pow(std::max(0.0, b.upper - b.lower), exponent);
  }
  return sum * grid.cell_volume();
}

std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss) {
  std::vector<double> dist(rows * rows, 0.0);
  for (std::size_t a = 0; a < rows; ++a) {
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
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      const double dist =
          sup_norm_distance(anchors.xs.subspan(i * d, d), anchors.xs.subspan(j * d, d));
      if (std::abs(anchors.ys[i] - anchors.ys[j]) > L * dist + tol) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

}  // namespace serial
}  // namespace onreg::kernels
