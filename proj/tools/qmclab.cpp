// Command-line experiment runner. Exit codes: 0 success, 1 config error,
// 2 runtime failure.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qmclab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qmclab: deterministic quantum-measurement experiments"};
  app.get_formatter()->column_width(34);

  std::string experiment;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::size_t jobs = 0;

  std::string names;
  for (const std::string& n : qmclab::experiment_names())
    names += (names.empty() ? "" : ", ") + n;

  app.add_option("experiment", experiment, "Experiment name (" + names + ")")
      ->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  const auto* seed_opt =
      app.add_option("--seed", seed, "Override the config seed");
  const auto* trials_opt =
      app.add_option("--trials", trials, "Override the config trial count");
  const auto* jobs_opt =
      app.add_option("--jobs", jobs, "Worker threads (default from config)");
  app.add_option("--out", out_dir, "Output directory (default: .)");

  CLI11_PARSE(app, argc, argv);

  qmclab::ExperimentConfig config;
  try {
    config = qmclab::parse_config_file(config_path);
    if (config.experiment != experiment)
      throw qmclab::config_error(
          "config:1: config is for experiment '" + config.experiment +
          "' but '" + experiment + "' was requested");
    if (seed_opt->count() > 0) config.seed = seed;
    if (trials_opt->count() > 0) {
      if (trials == 0) throw qmclab::config_error("config:1: --trials must be >= 1");
      config.trials = trials;
    }
    if (jobs_opt->count() > 0) {
      if (jobs == 0 || jobs > 256)
        throw qmclab::config_error("config:1: --jobs must be in 1..256");
      config.jobs = jobs;
    }
  } catch (const qmclab::config_error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 1;
  }

  try {
    const qmclab::Summary summary = qmclab::run_experiment(config, out_dir);
    std::cout << summary.text;
    std::cout << "wrote " << out_dir << "/" << config.experiment << ".csv and "
              << out_dir << "/" << config.experiment << ".summary.txt\n";
  } catch (const qmclab::config_error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
