// Command line front end: `onreg run <config.json>` and `onreg list`.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "onreg/errors.hpp"
#include "onreg/experiment.hpp"
#include "onreg/io.hpp"
#include "onreg/registry.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Realizable online regression experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run every cell of an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* seed_opt = run->add_option("--seed", seed, "Base seed (overrides the config)");
  run->add_option("--jobs", jobs, "Sweep cells to run concurrently")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "List learners, environments, losses and fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : onreg::kExitConfig;
  }

  if (app.got_subcommand("list")) {
    std::cout << onreg::list_registry();
    return 0;
  }

  onreg::ExperimentConfig config;
  try {
    config = onreg::parse_config(onreg::read_text_file(config_path));
  } catch (const onreg::ConfigError& e) {
    std::cerr << config_path << ":" << e.what() << "\n";
    return onreg::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return onreg::kExitConfig;
  }

  onreg::RunOptions options;
  if (*out_opt) options.out_dir = out_dir;
  if (*seed_opt) options.seed = seed;
  options.jobs = jobs;
  try {
    const onreg::RunOutcome outcome = onreg::run_config(config, options);
    for (const auto& cell : outcome.summary["cells"]) {
      if (cell.contains("error")) {
        std::cerr << "cell " << cell["cell"].get<std::size_t>() << ": "
                  << cell["error"].get<std::string>() << "\n";
      } else if (cell["bound_satisfied"] == false) {
        std::cerr << "cell " << cell["cell"].get<std::size_t>() << ": bound violated\n";
      }
    }
    std::cout << "wrote " << outcome.files.size() << " files to "
              << options.out_dir.value_or(config.output) << "\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
