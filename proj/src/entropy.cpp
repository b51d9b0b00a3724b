#include "onreg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "onreg/errors.hpp"
#include "onreg/io.hpp"

namespace onreg {

CoverResult covering_number(const FiniteClass& cls, const RowSet& subset, double eps,
                            const CoverOptions& options) {
  if (subset.empty()) throw DomainError("covering number of an empty subset");
  if (subset.universe() != cls.size()) throw DomainError("subset belongs to a different class");
  std::vector<RowSet> balls;
  const std::vector<std::size_t> centers =
      options.centers_from_subset ? subset.members() : cls.all().members();
  balls.reserve(centers.size());
  for (std::size_t c : centers) balls.push_back(cls.ball(c, eps) & subset);

  if (subset.count() <= options.exact_limit) {
    if (auto exact = exact_set_cover(balls, subset)) return *exact;
  }
  CoverResult greedy = greedy_set_cover(balls, subset);
  if (packing_lower_bound(balls, subset) == greedy.size) {
    greedy.exact = true;
    return greedy;
  }
  if (auto exact = exact_set_cover(balls, subset, 2'000'000)) return *exact;
  return greedy;
}

std::vector<CoverStep> covering_profile(const FiniteClass& cls, const RowSet& subset,
                                        const CoverOptions& options) {
  std::vector<double> starts = {0.0};
  for (double level : cls.distance_levels()) {
    if (level > starts.back()) starts.push_back(level);
  }
  const double diam = cls.diameter();
  std::vector<CoverStep> steps;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (starts[i] >= diam && i > 0) break;
    const CoverResult r = covering_number(cls, subset, starts[i], options);
    const double to = i + 1 < starts.size() ? std::min(starts[i + 1], diam) : diam;
    steps.push_back({starts[i], to, r.size, r.exact});
  }
  return steps;
}

PotentialResult entropy_integral(const FiniteClass& cls, const RowSet& subset, double from,
                                 double to, const CoverOptions& options) {
  from = std::max(from, 0.0);
  to = std::min(to, cls.diameter());
  PotentialResult result;
  if (!(to > from)) {
    if (subset.empty()) throw DomainError("potential of an empty subset");
    return result;
  }
  for (const CoverStep& s : covering_profile(cls, subset, options)) {
    const double lo = std::max(s.from, from);
    const double hi = std::min(s.to, to);
    if (hi <= lo) continue;
    result.value += (hi - lo) * std::log2(static_cast<double>(s.count));
    result.exact = result.exact && s.exact;
  }
  return result;
}

PotentialResult entropy_potential(const FiniteClass& cls, const RowSet& subset,
                                  const CoverOptions& options) {
  return entropy_integral(cls, subset, 0.0, cls.diameter(), options);
}

// ---------------------------------------------------------------------------

std::vector<double> admissible_eps_grid(double gap, double c, std::size_t count) {
  std::vector<double> grid;
  const double limit = gap / (2.0 * c);
  if (!(limit > 0.0)) return grid;
  for (std::size_t i = 1; i <= count; ++i) {
    grid.push_back(limit * static_cast<double>(i) / static_cast<double>(count + 1));
  }
  return grid;
}

SplitReport check_cover_split(const FiniteClass& cls, const RowSet& subset, const NodeQuery& node,
                              const std::vector<double>& eps_grid) {
  const RowSet u0 = cls.restrict(subset, node.x, node.s0);
  const RowSet u1 = cls.restrict(subset, node.x, node.s1);
  if (u0.empty() || u1.empty()) {
    throw PreconditionError("node at point " + std::to_string(node.x) +
                            " has an empty child version space");
  }
  SplitReport report;
  report.gap = cls.loss()(node.s0, node.s1);
  report.limit = report.gap / (2.0 * cls.loss().c());
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps < report.limit)) continue;
    ++report.tested;
    const std::size_t n = covering_number(cls, subset, eps).size;
    const std::size_t n0 = covering_number(cls, u0, eps).size;
    const std::size_t n1 = covering_number(cls, u1, eps).size;
    if (n < n0 + n1) report.violations.push_back({eps, n, n0, n1});
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json node_json(const ScaledTree& tree, std::size_t index, std::size_t level) {
  const NodeQuery& q = tree.nodes[index];
  nlohmann::json j = {{"x", q.x}, {"s0", q.s0}, {"s1", q.s1}};
  if (level + 1 < tree.depth) {
    j["children"] = {node_json(tree, 2 * index + 1, level + 1),
                     node_json(tree, 2 * index + 2, level + 1)};
  }
  return j;
}

std::size_t json_depth(const nlohmann::json& j) {
  if (j.is_null()) return 0;
  if (!j.contains("children") || j["children"].empty()) return 1;
  const auto& ch = j.at("children");
  if (ch.size() != 2) throw DomainError("tree nodes need exactly two children");
  const std::size_t left = json_depth(ch[0]);
  if (json_depth(ch[1]) != left) throw DomainError("tree is not complete");
  return left + 1;
}

void fill_nodes(const nlohmann::json& j, ScaledTree& tree, std::size_t index) {
  tree.nodes[index] = {j.at("x").get<std::size_t>(), j.at("s0").get<double>(),
                       j.at("s1").get<double>()};
  if (j.contains("children") && !j["children"].empty()) {
    fill_nodes(j["children"][0], tree, 2 * index + 1);
    fill_nodes(j["children"][1], tree, 2 * index + 2);
  }
}

void check_node_shape(const FiniteClass& cls, const ScaledTree& tree) {
  if (tree.nodes.size() + 1 != (std::size_t{1} << tree.depth)) {
    throw DomainError("tree node count does not match its depth");
  }
  for (const NodeQuery& q : tree.nodes) {
    if (q.x >= cls.points()) throw DomainError("tree queries a point outside the class");
  }
}

}  // namespace

std::string ScaledTree::to_json() const {
  if (depth == 0) return "null";
  return node_json(*this, 0, 0).dump(2);
}

ScaledTree ScaledTree::from_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    ScaledTree tree;
    tree.depth = json_depth(j);
    tree.nodes.resize((std::size_t{1} << tree.depth) - 1);
    if (tree.depth > 0) fill_nodes(j, tree, 0);
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad tree description: ") + e.what());
  }
}

bool tree_realizable(const FiniteClass& cls, const ScaledTree& tree) {
  check_node_shape(cls, tree);
  std::function<bool(std::size_t, std::size_t, const RowSet&)> walk =
      [&](std::size_t index, std::size_t level, const RowSet& u) {
        if (u.empty()) return false;
        if (level == tree.depth) return true;
        const NodeQuery& q = tree.nodes[index];
        return walk(2 * index + 1, level + 1, cls.restrict(u, q.x, q.s0)) &&
               walk(2 * index + 2, level + 1, cls.restrict(u, q.x, q.s1));
      };
  return walk(0, 0, cls.all());
}

DescentResult greedy_branch_descent(const FiniteClass& cls, const ScaledTree& tree, double tol) {
  check_node_shape(cls, tree);
  const double c = cls.loss().c();
  DescentResult result;
  RowSet u = cls.all();
  double phi = entropy_potential(cls, u).value;
  result.potential_trace.push_back(phi);
  std::size_t index = 0;
  for (std::size_t level = 0; level < tree.depth; ++level) {
    const NodeQuery& q = tree.nodes[index];
    const double gap = cls.loss()(q.s0, q.s1);
    const RowSet children[2] = {cls.restrict(u, q.x, q.s0), cls.restrict(u, q.x, q.s1)};
    if (children[0].empty() || children[1].empty()) {
      throw PreconditionError("tree is not realizable: empty version space at depth " +
                              std::to_string(level + 1));
    }
    const double target = phi - gap / (4.0 * c) + tol;
    int chosen = -1;
    double chosen_phi = 0.0;
    for (int b = 0; b < 2 && chosen < 0; ++b) {
      const double child_phi = entropy_potential(cls, children[b]).value;
      if (child_phi <= target) {
        chosen = b;
        chosen_phi = child_phi;
      }
    }
    if (chosen < 0) {
      throw std::logic_error("no child reaches the required potential drop at depth " +
                             std::to_string(level + 1));
    }
    result.branch.push_back(chosen);
    result.gap_sum += gap;
    u = children[chosen];
    phi = chosen_phi;
    result.potential_trace.push_back(phi);
    index = 2 * index + 1 + static_cast<std::size_t>(chosen);
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct DimensionSearch {
  const FiniteClass& cls;
  std::size_t budget;
  std::size_t evaluated = 0;
  std::vector<std::unordered_map<RowSet, double, RowSetHash>> memo;

  double value(const RowSet& u, std::size_t depth) {
    if (depth == 0 || u.count() < 2) return 0.0;
    auto& table = memo[depth];
    if (auto it = table.find(u); it != table.end()) return it->second;
    if (++evaluated > budget) throw std::length_error("budget");
    double best = 0.0;
    for (std::size_t x = 0; x < cls.points(); ++x) {
      const std::vector<double> labels = cls.labels_at(u, x);
      if (labels.size() < 2) continue;
      std::vector<RowSet> parts;
      parts.reserve(labels.size());
      for (double s : labels) parts.push_back(cls.restrict(u, x, s));
      for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
          const double gap = cls.loss()(labels[a], labels[b]);
          if (!(gap > 0.0)) continue;
          const double va = value(parts[a], depth - 1);
          if (gap + va <= best) continue;
          best = std::max(best, gap + std::min(va, value(parts[b], depth - 1)));
        }
      }
    }
    table.emplace(u, best);
    return best;
  }
};

}  // namespace

double online_dim_lower_bound(const FiniteClass& cls, std::size_t max_depth, std::size_t budget) {
  if (max_depth > 4) throw DomainError("exhaustive tree search is limited to depth 4");
  DimensionSearch search{cls, budget, 0, std::vector<std::unordered_map<RowSet, double, RowSetHash>>(max_depth + 1)};
  double completed = 0.0;
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    try {
      completed = search.value(cls.all(), depth);
    } catch (const std::length_error&) {
      throw ResourceError("online dimension search exceeded its budget of " +
                              std::to_string(budget) + " states at depth " + std::to_string(depth),
                          completed);
    }
  }
  return completed;
}

// ---------------------------------------------------------------------------

FiniteClass cube_class() {
  return FiniteClass({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, Loss::power(1.0), {"x0", "x1"});
}

FiniteClass separated_grid_class(double L, std::size_t d) {
  const double side = 2.0 * L;
  if (side != std::floor(side) || side < 1.0) {
    throw DomainError("separated grid class needs 2L to be a positive integer");
  }
  std::size_t points = 1;
  for (std::size_t i = 0; i < d; ++i) points *= static_cast<std::size_t>(side);
  if (points > 4) throw ResourceError("separated grid class would have more than 16 rows", 0.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t mask = 0; mask < (std::size_t{1} << points); ++mask) {
    std::vector<double> row(points);
    for (std::size_t p = 0; p < points; ++p) row[p] = static_cast<double>((mask >> (points - 1 - p)) & 1u);
    rows.push_back(std::move(row));
  }
  return FiniteClass(std::move(rows), Loss::power(1.0));
}

FiniteClass random_finite_class(Rng& rng, std::size_t n, std::size_t m, const Loss& loss,
                                std::size_t levels) {
  if (levels < 2) throw DomainError("need at least two value levels");
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  for (auto& row : rows) {
    for (double& v : row) {
      v = static_cast<double>(uniform_index(rng, levels)) / static_cast<double>(levels - 1);
    }
  }
  return FiniteClass(std::move(rows), loss);
}

ScaledTree random_realizable_tree(Rng& rng, const FiniteClass& cls, std::size_t depth) {
  std::function<bool(ScaledTree&, std::size_t, std::size_t, const RowSet&)> build =
      [&](ScaledTree& tree, std::size_t index, std::size_t level, const RowSet& u) {
        if (level == tree.depth) return true;
        std::vector<NodeQuery> options;
        for (std::size_t x = 0; x < cls.points(); ++x) {
          const auto labels = cls.labels_at(u, x);
          for (std::size_t a = 0; a < labels.size(); ++a) {
            for (std::size_t b = a + 1; b < labels.size(); ++b) {
              options.push_back({x, labels[a], labels[b]});
            }
          }
        }
        // A few random attempts per node keep generation cheap.
        for (int attempt = 0; attempt < 4 && !options.empty(); ++attempt) {
          const std::size_t pick = uniform_index(rng, options.size());
          NodeQuery q = options[pick];
          if (uniform01(rng) < 0.5) std::swap(q.s0, q.s1);
          tree.nodes[index] = q;
          if (build(tree, 2 * index + 1, level + 1, cls.restrict(u, q.x, q.s0)) &&
              build(tree, 2 * index + 2, level + 1, cls.restrict(u, q.x, q.s1))) {
            return true;
          }
        }
        return false;
      };
  for (std::size_t d = depth + 1; d-- > 0;) {
    ScaledTree tree;
    tree.depth = d;
    tree.nodes.resize((std::size_t{1} << d) - 1);
    if (build(tree, 0, 0, cls.all())) return tree;
  }
  return {};
}

}  // namespace onreg
