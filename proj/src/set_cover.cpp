#include "onreg/set_cover.hpp"

#include <algorithm>
#include <numeric>

#include "onreg/errors.hpp"

namespace onreg {

namespace {

void require_coverable(const std::vector<RowSet>& sets, const RowSet& universe) {
  RowSet all(universe.universe());
  for (const RowSet& s : sets) all = all | s;
  if (!universe.subset_of(all)) {
    throw PreconditionError("some element lies in no candidate set");
  }
}

struct Search {
  std::vector<RowSet> sets;
  std::vector<std::size_t> original;  // index of sets[i] in the caller's list
  std::size_t budget;
  std::size_t nodes = 0;
  bool exhausted = false;
  std::size_t best;
  std::vector<std::size_t> best_choice;
  std::vector<std::size_t> current;

  void solve(const RowSet& uncovered) {
    if (exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    const std::size_t remaining = uncovered.count();
    if (remaining == 0) {
      if (current.size() < best) {
        best = current.size();
        best_choice = current;
      }
      return;
    }
    std::size_t max_cover = 0;
    for (const RowSet& s : sets) max_cover = std::max(max_cover, s.intersection_count(uncovered));
    const std::size_t lower = (remaining + max_cover - 1) / max_cover;
    if (current.size() + lower >= best) return;

    // Element with the fewest covering candidates.
    std::size_t pivot = 0;
    std::size_t fewest = sets.size() + 1;
    for (std::size_t e : uncovered.members()) {
      std::size_t k = 0;
      for (const RowSet& s : sets) k += s.test(e);
      if (k < fewest) {
        fewest = k;
        pivot = e;
      }
    }
    std::vector<std::size_t> options;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].test(pivot)) options.push_back(i);
    }
    std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return sets[a].intersection_count(uncovered) > sets[b].intersection_count(uncovered);
    });
    for (std::size_t i : options) {
      current.push_back(original[i]);
      solve(uncovered.minus(sets[i]));
      current.pop_back();
      if (exhausted) return;
    }
  }
};

}  // namespace

CoverResult greedy_set_cover(const std::vector<RowSet>& sets, const RowSet& universe) {
  require_coverable(sets, universe);
  CoverResult result;
  RowSet uncovered = universe;
  while (!uncovered.empty()) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const std::size_t gain = sets[i].intersection_count(uncovered);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    result.chosen.push_back(best);
    uncovered = uncovered.minus(sets[best]);
  }
  result.size = result.chosen.size();
  result.exact = false;
  return result;
}

std::size_t packing_lower_bound(const std::vector<RowSet>& sets, const RowSet& universe) {
  std::vector<std::size_t> elements = universe.members();
  std::vector<std::size_t> degree(universe.universe(), 0);
  for (std::size_t e : elements) {
    for (const RowSet& s : sets) degree[e] += s.test(e);
  }
  std::stable_sort(elements.begin(), elements.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
  std::vector<bool> used(sets.size(), false);
  std::size_t packed = 0;
  for (std::size_t e : elements) {
    bool free = true;
    for (std::size_t i = 0; i < sets.size() && free; ++i) free = !(sets[i].test(e) && used[i]);
    if (!free) continue;
    ++packed;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].test(e)) used[i] = true;
    }
  }
  return packed;
}

std::optional<CoverResult> exact_set_cover(const std::vector<RowSet>& sets, const RowSet& universe,
                                           std::size_t node_budget) {
  require_coverable(sets, universe);
  if (universe.empty()) return CoverResult{0, true, {}};

  // Restrict to the universe and drop duplicate or dominated candidates.
  std::vector<RowSet> restricted;
  std::vector<std::size_t> original;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    RowSet r = sets[i] & universe;
    if (r.empty()) continue;
    restricted.push_back(std::move(r));
    original.push_back(i);
  }
  Search search;
  for (std::size_t i = 0; i < restricted.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < restricted.size() && !dominated; ++j) {
      if (i == j || !restricted[i].subset_of(restricted[j])) continue;
      // Equal sets: keep the lowest index only.
      dominated = !(restricted[i] == restricted[j]) || j < i;
    }
    if (!dominated) {
      search.sets.push_back(restricted[i]);
      search.original.push_back(original[i]);
    }
  }

  const CoverResult greedy = greedy_set_cover(search.sets, universe);
  search.best = greedy.size;
  for (std::size_t i : greedy.chosen) search.best_choice.push_back(search.original[i]);
  if (packing_lower_bound(search.sets, universe) < search.best) {
    search.budget = node_budget;
    search.solve(universe);
    if (search.exhausted) return std::nullopt;
  }
  CoverResult result;
  result.size = search.best;
  result.exact = true;
  result.chosen = search.best_choice;
  std::sort(result.chosen.begin(), result.chosen.end());
  return result;
}

}  // namespace onreg
