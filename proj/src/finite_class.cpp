#include "onreg/finite_class.hpp"

#include <algorithm>
#include "json.hpp"

#include "onreg/errors.hpp"
#include "onreg/io.hpp"
#include "onreg/kernels.hpp"

namespace onreg {

FiniteClass::FiniteClass(std::vector<std::vector<double>> values, Loss loss,
                         std::vector<std::string> point_names)
    : n_(values.size()),
      m_(values.empty() ? 0 : values.front().size()),
      loss_(std::move(loss)),
      point_names_(std::move(point_names)) {
  if (n_ == 0) throw DomainError("a finite class needs at least one hypothesis");
  if (m_ == 0) throw DomainError("a finite class needs at least one point");
  if (!point_names_.empty() && point_names_.size() != m_) {
    throw DomainError("point names do not match the number of columns");
  }
  values_.reserve(n_ * m_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (values[i].size() != m_) throw DomainError("hypothesis rows have different lengths");
    for (double v : values[i]) {
      if (!loss_.accepts(v)) {
        throw DomainError("value " + format_double(v) + " is not a label of " + loss_.describe());
      }
      values_.push_back(v);
    }
  }
  dist_ = kernels::sup_distance_matrix(values_, n_, m_, loss_);
  diameter_ = *std::max_element(dist_.begin(), dist_.end());
}

RowSet FiniteClass::restrict(const RowSet& subset, std::size_t point, double label) const {
  RowSet out(n_);
  for (std::size_t i : subset.members()) {
    if (value(i, point) == label) out.set(i);
  }
  return out;
}

std::vector<double> FiniteClass::labels_at(const RowSet& subset, std::size_t point) const {
  std::vector<double> labels;
  for (std::size_t i : subset.members()) labels.push_back(value(i, point));
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

RowSet FiniteClass::ball(std::size_t center, double eps) const {
  RowSet out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    if (distance(center, j) <= eps) out.set(j);
  }
  return out;
}

std::vector<double> FiniteClass::distance_levels(double merge_tol) const {
  std::vector<double> d = dist_;
  std::sort(d.begin(), d.end());
  std::vector<double> levels;
  for (double v : d) {
    if (!levels.empty() && v - levels.back() <= merge_tol) {
      levels.back() = v;
    } else {
      levels.push_back(v);
    }
  }
  return levels;
}

// ---------------------------------------------------------------------------

std::string loss_to_json(const Loss& loss) {
  nlohmann::json j;
  switch (loss.kind()) {
    case LossKind::PowerQ:
      j = {{"kind", "power"}, {"q", loss.q()}};
      break;
    case LossKind::ClippedSquared:
      j = {{"kind", "clipped_squared"}};
      break;
    case LossKind::ZeroOne:
      j = {{"kind", "zero_one"}};
      break;
    case LossKind::Custom:
      j = {{"kind", "custom"}, {"table", loss.table()}, {"c", loss.c()}};
      if (!loss.label_names().empty()) j["labels"] = loss.label_names();
      break;
  }
  return j.dump(2);
}

Loss loss_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return Loss::power(j.value("q", 1.0));
    if (kind == "clipped_squared") return Loss::clipped_squared();
    if (kind == "zero_one") return Loss::zero_one();
    if (kind == "custom") {
      auto table = j.at("table").get<std::vector<std::vector<double>>>();
      double c = j.value("c", 0.0);
      if (c <= 0.0) c = minimal_triangle_constant(table);
      return Loss::custom(std::move(table), c,
                          j.value("labels", std::vector<std::string>{}));
    }
    throw DomainError("unknown loss kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad loss descriptor: ") + e.what());
  }
}

void save_finite_class(const FiniteClass& cls, const std::string& csv_path,
                       const std::string& loss_json_path) {
  CsvTable csv;
  for (std::size_t x = 0; x < cls.points(); ++x) {
    csv.header.push_back(cls.point_names().empty() ? "x" + std::to_string(x)
                                                   : cls.point_names()[x]);
  }
  for (std::size_t i = 0; i < cls.size(); ++i) {
    std::vector<std::string> row;
    for (std::size_t x = 0; x < cls.points(); ++x) row.push_back(format_double(cls.value(i, x)));
    csv.rows.push_back(std::move(row));
  }
  write_csv(csv, csv_path);
  write_text_file(loss_json_path, loss_to_json(cls.loss()) + "\n");
}

FiniteClass load_finite_class(const std::string& csv_path, const std::string& loss_json_path) {
  const CsvTable csv = read_csv(csv_path);
  std::vector<std::vector<double>> values;
  for (const auto& row : csv.rows) {
    if (row.size() != csv.header.size()) {
      throw DomainError(csv_path + ": row " + std::to_string(values.size() + 2) +
                        " has the wrong number of fields");
    }
    std::vector<double> v;
    for (const auto& field : row) v.push_back(parse_double(field));
    values.push_back(std::move(v));
  }
  return FiniteClass(std::move(values), loss_from_json(read_text_file(loss_json_path)), csv.header);
}

}  // namespace onreg
