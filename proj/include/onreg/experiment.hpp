#pragma once

// Batch experiment driver behind the `onreg` command line tool.
//
// A config is one JSON document:
//   {
//     "kind": "game" | "entropy" | "bound-table",
//     "learner": "envelope", "environment": "dyadic",     (game)
//     "fixture": "cube_class",                            (entropy)
//     "loss": "power" | {"kind": "power", "q": 2},         (optional)
//     "sweep": {"L": [1], "d": [1], "q": [1], "T": [16, 64]},
//     "seed": 7,
//     "output": "results"
//   }
// Sweep cells are the cross product of the axis lists (axes L, d, q, T,
// depth, eps, K); cell i draws its randomness from derive_seed(seed, i).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "onreg/registry.hpp"

namespace onreg {

enum class ExperimentKind { Game, Entropy, BoundTable };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Game;
  std::string learner;
  std::string environment;
  std::string fixture;
  /// Loss descriptor; "power" without q takes q from the sweep cell.
  std::string loss_name = "power";
  std::optional<double> loss_q;
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::uint64_t seed = 0;
  std::string output = "results";
};

/// Throws ConfigError with the 1-based line of the offending text.
ExperimentConfig parse_config(std::string_view text);

std::vector<CellParams> sweep_cells(const ExperimentConfig& config);

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitBound = 3, kExitResource = 4 };

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json summary;
  std::vector<std::string> files;
};

/// Runs every cell, writes one CSV per cell and summary.json into the output
/// directory, and reports the process exit code.
RunOutcome run_config(const ExperimentConfig& config, const RunOptions& options = {});

/// Least-squares fit y = slope * x + intercept with its R^2.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace onreg
