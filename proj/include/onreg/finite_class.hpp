#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "onreg/losses.hpp"
#include "onreg/row_set.hpp"

namespace onreg {

/// Explicit hypothesis table: row i holds h_i's value at each of m points.
/// The induced sup pseudo-metric d(i, j) = max_x loss(h_i(x), h_j(x)) is
/// computed once at construction.
class FiniteClass {
 public:
  FiniteClass(std::vector<std::vector<double>> values, Loss loss,
              std::vector<std::string> point_names = {});

  std::size_t size() const noexcept { return n_; }
  std::size_t points() const noexcept { return m_; }
  double value(std::size_t row, std::size_t point) const { return values_[row * m_ + point]; }
  const Loss& loss() const noexcept { return loss_; }
  const std::vector<std::string>& point_names() const noexcept { return point_names_; }

  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  double diameter() const noexcept { return diameter_; }
  RowSet all() const { return RowSet(n_, true); }

  /// {h in U : h(point) == label}.
  RowSet restrict(const RowSet& subset, std::size_t point, double label) const;
  /// Distinct values taken by members of U at `point`, ascending.
  std::vector<double> labels_at(const RowSet& subset, std::size_t point) const;
  /// Rows within distance eps of `center` (closed ball), over the whole class.
  RowSet ball(std::size_t center, double eps) const;
  /// Distinct pairwise distances, ascending; values closer than `merge_tol`
  /// collapse onto the largest member of their run.
  std::vector<double> distance_levels(double merge_tol = 1e-12) const;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<double> values_;
  Loss loss_;
  std::vector<std::string> point_names_;
  std::vector<double> dist_;
  double diameter_ = 0.0;
};

/// Loss descriptor JSON: {"kind": "power", "q": 2}, {"kind": "clipped_squared"},
/// {"kind": "zero_one"} or {"kind": "custom", "table": [[...]], "c": 1, "labels": [...]}.
std::string loss_to_json(const Loss& loss);
Loss loss_from_json(std::string_view text);

/// CSV with a header of point names and one row of values per hypothesis.
void save_finite_class(const FiniteClass& cls, const std::string& csv_path,
                       const std::string& loss_json_path);
FiniteClass load_finite_class(const std::string& csv_path, const std::string& loss_json_path);

}  // namespace onreg
