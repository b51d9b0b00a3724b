#include "onreg/registry.hpp"

#include <algorithm>

#include "onreg/divergence.hpp"
#include "onreg/entropy.hpp"
#include "onreg/lipschitz.hpp"
#include "onreg/relu.hpp"

namespace onreg {

namespace {

template <typename Entry>
std::vector<Entry> sorted(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.name < b.name; });
  return entries;
}

template <typename Entry>
const Entry* find_in(const std::vector<Entry>& entries, const std::string& name) {
  for (const Entry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<Hypothesis> constant_net(std::size_t levels) {
  std::vector<Hypothesis> net;
  for (std::size_t j = 0; j <= levels; ++j) {
    const double v = static_cast<double>(j) / static_cast<double>(levels);
    net.push_back([v](std::span<const double>) { return v; });
  }
  return net;
}

}  // namespace

const std::vector<LearnerEntry>& learner_registry() {
  static const std::vector<LearnerEntry> entries = sorted<LearnerEntry>({
      {"constant_half", "predicts 1/2 in every round",
       [](const CellParams&, const Loss&) {
         return std::make_unique<ConstantLearner>(0.5, "constant_half");
       }},
      {"elimination", "eliminates constants j/8 (j = 0..8) whose round loss exceeds eps",
       [](const CellParams& p, const Loss& loss) {
         return std::make_unique<EliminationLearner>(constant_net(8), loss, p.eps);
       }},
      {"envelope", "midpoint of the L-Lipschitz lower/upper envelopes",
       [](const CellParams& p, const Loss&) { return std::make_unique<EnvelopeLearner>(p.L, p.d); }},
      {"one_relu", "ReLU(w.x) with w <- w - (y_hat - y) x, w_1 = 0",
       [](const CellParams& p, const Loss&) { return std::make_unique<OneReluLearner>(p.d, false); }},
  });
  return entries;
}

const std::vector<EnvironmentEntry>& environment_registry() {
  static const std::vector<EnvironmentEntry> entries = sorted<EnvironmentEntry>({
      {"dyadic", "multiscale cube-centre adversary for q = d",
       [](const CellParams& p) { return std::make_unique<DyadicAdversary>(p.L, p.d, p.T); }},
      {"extremal", "random queries answered at the envelope end farther from the prediction",
       [](const CellParams& p) {
         return std::make_unique<ExtremalAdversary>(p.L, p.d, p.T, p.seed);
       }},
      {"grid", "separated-grid adversary answering 0 or 2L T^(-1/d)",
       [](const CellParams& p) { return std::make_unique<GridAdversary>(p.L, p.d, p.q, p.T); }},
      {"interval", "two-ReLU threshold adversary under 0/1 loss (depth rounds)",
       [](const CellParams& p) { return std::make_unique<IntervalAdversary>(p.depth); }},
      {"random_lipschitz", "random McShane target queried at uniform points",
       [](const CellParams& p) {
         return std::make_unique<RandomLipschitzEnvironment>(p.L, p.d, p.T, p.seed);
       }},
      {"random_relu", "ReLU(w*.x) with random w* and x in the unit ball",
       [](const CellParams& p) { return std::make_unique<RandomReluEnvironment>(p.d, p.T, p.seed); }},
  });
  return entries;
}

const std::vector<LossEntry>& loss_registry() {
  static const std::vector<LossEntry> entries = sorted<LossEntry>({
      {"clipped_squared", "min{1, (a-b)^2/4}, c = 2",
       [](const CellParams&) { return Loss::clipped_squared(); }},
      {"power", "|a-b|^q, c = 2^(q-1)", [](const CellParams& p) { return Loss::power(p.q); }},
      {"zero_one", "1[a != b], c = 1", [](const CellParams&) { return Loss::zero_one(); }},
  });
  return entries;
}

const std::vector<FixtureEntry>& fixture_registry() {
  static const std::vector<FixtureEntry> entries = sorted<FixtureEntry>({
      {"cube_class", "all {0,1} functions on two points, absolute loss",
       [](const CellParams&) { return cube_class(); }},
      {"divergence_example", "truncated finite-dimension / infinite-potential class (K <= 2 explicit)",
       [](const CellParams& p) { return divergence_class(p.K); }},
      {"random_class", "8 random hypotheses on 3 points, values in {0,1/3,2/3,1}, loss power(q)",
       [](const CellParams& p) {
         Rng rng = make_rng(p.seed, 0);
         return random_finite_class(rng, 8, 3, Loss::power(p.q));
       }},
      {"separated_grid", "all {0,1} functions on the (2L)^d separated grid points",
       [](const CellParams& p) { return separated_grid_class(p.L, p.d); }},
  });
  return entries;
}

const LearnerEntry* find_learner(const std::string& name) {
  return find_in(learner_registry(), name);
}
const EnvironmentEntry* find_environment(const std::string& name) {
  return find_in(environment_registry(), name);
}
const LossEntry* find_loss(const std::string& name) { return find_in(loss_registry(), name); }
const FixtureEntry* find_fixture(const std::string& name) {
  return find_in(fixture_registry(), name);
}

std::string list_registry() {
  std::string out;
  auto section = [&out](const std::string& title, const auto& entries) {
    out += title + ":\n";
    for (const auto& e : entries) {
      std::string name = "  " + e.name;
      if (name.size() < 22) name.resize(22, ' ');
      out += name + " " + e.description + "\n";
    }
  };
  section("environments", environment_registry());
  section("fixtures", fixture_registry());
  section("learners", learner_registry());
  section("losses", loss_registry());
  return out;
}

}  // namespace onreg
