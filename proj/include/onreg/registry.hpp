#pragma once

// Named constructors for learners, environments, losses and finite-class
// fixtures, shared by the experiment driver and the test suites.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "onreg/finite_class.hpp"
#include "onreg/losses.hpp"
#include "onreg/protocol.hpp"

namespace onreg {

/// One point of a parameter sweep.
struct CellParams {
  double L = 1.0;
  std::size_t d = 1;
  double q = 1.0;
  std::size_t T = 1000;
  std::size_t depth = 3;
  double eps = 0.25;
  std::size_t K = 2;
  std::uint64_t seed = 0;
};

struct LearnerEntry {
  std::string name;
  std::string description;
  std::function<std::unique_ptr<Learner>(const CellParams&, const Loss&)> make;
};

struct EnvironmentEntry {
  std::string name;
  std::string description;
  std::function<std::unique_ptr<Environment>(const CellParams&)> make;
};

struct LossEntry {
  std::string name;
  std::string description;
  std::function<Loss(const CellParams&)> make;
};

struct FixtureEntry {
  std::string name;
  std::string description;
  std::function<FiniteClass(const CellParams&)> make;
};

// Each list is sorted by name.
const std::vector<LearnerEntry>& learner_registry();
const std::vector<EnvironmentEntry>& environment_registry();
const std::vector<LossEntry>& loss_registry();
const std::vector<FixtureEntry>& fixture_registry();

const LearnerEntry* find_learner(const std::string& name);
const EnvironmentEntry* find_environment(const std::string& name);
const LossEntry* find_loss(const std::string& name);
const FixtureEntry* find_fixture(const std::string& name);

/// Alphabetized listing, one "section/name  description" line per entry.
std::string list_registry();

}  // namespace onreg
