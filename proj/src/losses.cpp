#include "onreg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "onreg/errors.hpp"
#include "onreg/io.hpp"

namespace onreg {

namespace {

constexpr double kDenominatorFloor = 1e-12;

std::size_t custom_index(double y, std::size_t size) {
  if (!std::isfinite(y) || y < 0.0 || y != std::floor(y) || y >= static_cast<double>(size)) {
    throw DomainError("label " + format_double(y) + " is not an index into a " +
                      std::to_string(size) + "-label loss table");
  }
  return static_cast<std::size_t>(y);
}

}  // namespace

Loss Loss::power(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("power loss needs q >= 1");
  Loss loss;
  loss.kind_ = LossKind::PowerQ;
  loss.q_ = q;
  loss.c_ = std::pow(2.0, q - 1.0);
  return loss;
}

Loss Loss::clipped_squared() {
  Loss loss;
  loss.kind_ = LossKind::ClippedSquared;
  loss.q_ = 2.0;
  loss.c_ = 2.0;
  return loss;
}

Loss Loss::zero_one() {
  Loss loss;
  loss.kind_ = LossKind::ZeroOne;
  loss.c_ = 1.0;
  return loss;
}

Loss Loss::custom(std::vector<std::vector<double>> table, double c,
                  std::vector<std::string> label_names) {
  const std::size_t n = table.size();
  if (n == 0) throw DomainError("custom loss table is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw DomainError("custom loss table is not square");
    if (table[i][i] != 0.0) {
      throw DomainError("custom loss table has a nonzero diagonal entry at label " +
                        std::to_string(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(table[i][j] >= 0.0) || !std::isfinite(table[i][j])) {
        throw DomainError("custom loss table entries must be finite and nonnegative");
      }
      if (table[i][j] != table[j][i]) {
        throw DomainError("custom loss table is not symmetric at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      }
    }
  }
  if (!(c >= 1.0)) throw DomainError("approximation constant c must be >= 1");
  if (!label_names.empty() && label_names.size() != n) {
    throw DomainError("custom loss label names do not match the table size");
  }
  Loss loss;
  loss.kind_ = LossKind::Custom;
  loss.c_ = c;
  loss.table_ = std::move(table);
  loss.names_ = std::move(label_names);
  return loss;
}

double Loss::evaluate(double y1, double y2) const {
  switch (kind_) {
    case LossKind::PowerQ: {
      const double gap = std::abs(y1 - y2);
      if (q_ == 1.0) return gap;
      if (q_ == 2.0) return gap * gap;
      return std::pow(gap, q_);
    }
    case LossKind::ClippedSquared: {
      const double gap = y1 - y2;
      return std::min(1.0, gap * gap / 4.0);
    }
    case LossKind::ZeroOne:
      return y1 == y2 ? 0.0 : 1.0;
    case LossKind::Custom:
      return table_[custom_index(y1, table_.size())][custom_index(y2, table_.size())];
  }
  return 0.0;
}

bool Loss::accepts(double y) const noexcept {
  if (!std::isfinite(y)) return false;
  if (kind_ != LossKind::Custom) return true;
  return y >= 0.0 && y == std::floor(y) && y < static_cast<double>(table_.size());
}

std::string Loss::describe() const {
  switch (kind_) {
    case LossKind::PowerQ:
      return "power(q=" + format_double(q_) + ")";
    case LossKind::ClippedSquared:
      return "clipped_squared";
    case LossKind::ZeroOne:
      return "zero_one";
    case LossKind::Custom:
      return "custom(" + std::to_string(table_.size()) + " labels, c=" + format_double(c_) + ")";
  }
  return "unknown";
}

TriangleReport check_approx_triangle(const Loss& loss, const std::vector<Triple>& triples) {
  TriangleReport report;
  const double c = loss.c();
  for (const Triple& t : triples) {
    const double lhs = loss(t[0], t[1]);
    const double denominator = loss(t[0], t[2]) + loss(t[1], t[2]);
    const double rhs = c * denominator;
    if (denominator < kDenominatorFloor) {
      if (lhs > 0.0) {
        report.max_required_c = std::numeric_limits<double>::infinity();
        report.violations.push_back({t, lhs, rhs});
      }
      continue;
    }
    report.max_required_c = std::max(report.max_required_c, lhs / denominator);
    // Relative slack absorbs rounding in pow(); exact equality cases pass.
    if (lhs > rhs * (1.0 + 1e-12) + 1e-15) report.violations.push_back({t, lhs, rhs});
  }
  return report;
}

double minimal_triangle_constant(const std::vector<std::vector<double>>& table) {
  const std::size_t n = table.size();
  double c = 1.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t z = 0; z < n; ++z) {
        const double den = table[a][z] + table[b][z];
        if (den < kDenominatorFloor) {
          if (table[a][b] > 0.0) return std::numeric_limits<double>::infinity();
          continue;
        }
        c = std::max(c, table[a][b] / den);
      }
    }
  }
  return c;
}

Loss load_custom_loss_csv(const std::string& path, double c) {
  const CsvTable csv = read_csv(path);
  if (csv.header.empty()) throw DomainError(path + ": missing header row of label names");
  const std::size_t n = csv.header.size();
  std::vector<std::vector<double>> table;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    std::size_t offset = 0;
    if (row.size() == n + 1) {
      offset = 1;
    } else if (row.size() != n) {
      throw DomainError(path + ": row " + std::to_string(r + 2) + " has " +
                        std::to_string(row.size()) + " fields, expected " + std::to_string(n));
    }
    std::vector<double> values;
    for (std::size_t i = offset; i < row.size(); ++i) values.push_back(parse_double(row[i]));
    table.push_back(std::move(values));
  }
  if (table.size() != n) throw DomainError(path + ": loss table is not square");
  if (c <= 0.0) c = minimal_triangle_constant(table);
  if (!std::isfinite(c)) throw DomainError(path + ": loss admits no finite triangle constant");
  return Loss::custom(std::move(table), c, csv.header);
}

void save_custom_loss_csv(const Loss& loss, const std::string& path) {
  if (loss.kind() != LossKind::Custom) throw DomainError("only custom losses have a table");
  CsvTable csv;
  for (std::size_t i = 0; i < loss.label_count(); ++i) {
    csv.header.push_back(loss.label_names().empty() ? "y" + std::to_string(i)
                                                    : loss.label_names()[i]);
  }
  for (const auto& row : loss.table()) {
    std::vector<std::string> fields;
    for (double v : row) fields.push_back(format_double(v));
    csv.rows.push_back(std::move(fields));
  }
  write_csv(csv, path);
}

}  // namespace onreg
