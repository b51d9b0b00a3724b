#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// onreg::kernels::serial and an OpenMP version in onreg::kernels::omp; the
// unqualified entry points pick one by problem size. Min/max reductions are
// exact, so both versions return bit-identical results for them; the integral
// kernel sums in a different order and agrees to rounding only.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "onreg/losses.hpp"

namespace onreg::kernels {

/// Row-major anchors: point s occupies xs[s*d .. s*d+d).
struct AnchorView {
  std::span<const double> xs;
  std::span<const double> ys;
  std::size_t d = 1;

  std::size_t size() const noexcept { return ys.size(); }
};

/// Clipped Lipschitz envelopes at one query point:
///   lower = max{0, max_s (y_s - L|x - x_s|_inf)}
///   upper = min{1, min_s (y_s + L|x - x_s|_inf)}
struct Bounds {
  double lower = 0.0;
  double upper = 1.0;
};

double sup_norm_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Integer grid point of [-1,1]^d for the midpoint rule: coordinate i is
/// -1 + (k_i + 1/2) * 2/resolution.
struct GridSpec {
  std::size_t d = 1;
  std::size_t resolution = 2;

  std::size_t cell_count() const noexcept;
  double cell_volume() const noexcept;
};

namespace serial {
Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x);
double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid);
std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss);
std::optional<std::pair<std::size_t, std::size_t>> first_lipschitz_violation(
    const AnchorView& anchors, double L, double tol);
}  // namespace serial

namespace omp {
Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x);
double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid);
std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss);
std::optional<std::pair<std::size_t, std::size_t>> first_lipschitz_violation(
    const AnchorView& anchors, double L, double tol);
}  // namespace omp

Bounds envelope_bounds(const AnchorView& anchors, double L, std::span<const double> x);
double width_power_integral(const AnchorView& anchors, double L, double exponent,
                            const GridSpec& grid);
/// rows x rows matrix of max_j loss(values[a][j], values[b][j]).
std::vector<double> sup_distance_matrix(std::span<const double> values, std::size_t rows,
                                        std::size_t cols, const Loss& loss);
/// Lexicographically first pair (i < j) with |y_i - y_j| > L|x_i - x_j|_inf + tol.
std::optional<std::pair<std::size_t, std::size_t>> first_lipschitz_violation(
    const AnchorView& anchors, double L, double tol);

/// Work sizes at or above which the dispatchers go parallel (when not already
/// inside a parallel region).
inline constexpr std::size_t kParallelAnchorThreshold = 1u << 14;
inline constexpr std::size_t kParallelCellThreshold = 1u << 12;

}  // namespace onreg::kernels
