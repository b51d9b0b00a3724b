#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace onreg {

enum class LossKind { PowerQ, ClippedSquared, ZeroOne, Custom };

/// Symmetric nonnegative pairwise loss on labels together with the constant c
/// of its approximate triangle inequality l(a,b) <= c (l(a,z) + l(b,z)).
///
/// Custom losses live on an indexed finite label set: labels are passed as
/// doubles holding the integer index into the table.
class Loss {
 public:
  static Loss power(double q);
  static Loss clipped_squared();
  static Loss zero_one();
  /// `table` must be square, symmetric, nonnegative with zero diagonal.
  /// `c` is the claimed approximation constant (>= 1).
  static Loss custom(std::vector<std::vector<double>> table, double c,
                     std::vector<std::string> label_names = {});

  double operator()(double y1, double y2) const { return evaluate(y1, y2); }
  double evaluate(double y1, double y2) const;

  LossKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  double c() const noexcept { return c_; }
  std::size_t label_count() const noexcept { return table_.size(); }
  const std::vector<std::vector<double>>& table() const noexcept { return table_; }
  const std::vector<std::string>& label_names() const noexcept { return names_; }

  /// True when `y` is a legal label for this loss (finite; a valid index for Custom).
  bool accepts(double y) const noexcept;
  std::string describe() const;

 private:
  Loss() = default;

  LossKind kind_ = LossKind::PowerQ;
  double q_ = 1.0;
  double c_ = 1.0;
  std::vector<std::vector<double>> table_;
  std::vector<std::string> names_;
};

using Triple = std::array<double, 3>;

struct TriangleViolation {
  Triple triple;
  double lhs;  // l(y1, y2)
  double rhs;  // c * (l(y1, y3) + l(y2, y3))
};

struct TriangleReport {
  std::vector<TriangleViolation> violations;
  /// Largest l(y1,y2) / (l(y1,y3) + l(y2,y3)) over triples with a positive
  /// denominator; +inf when some triple has a zero denominator but l(y1,y2) > 0.
  double max_required_c = 0.0;
};

/// Checks the approximate triangle inequality with the loss's declared c.
TriangleReport check_approx_triangle(const Loss& loss, const std::vector<Triple>& triples);

/// Smallest c for which a Custom loss satisfies the relaxed triangle inequality
/// over every label triple (at least 1).
double minimal_triangle_constant(const std::vector<std::vector<double>>& table);

/// Reads a square loss table from CSV: a header row of label names, then one
/// row per label (an optional leading row-name column is accepted). When
/// `c <= 0` the minimal valid constant is computed.
Loss load_custom_loss_csv(const std::string& path, double c = 0.0);
void save_custom_loss_csv(const Loss& loss, const std::string& path);

}  // namespace onreg
