#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "matpow/error.hpp"
#include "matpow/harness.hpp"

namespace matpow::harness {

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"matpow-lab: desk-scale experiments on matrix power equations and character sums"};
  std::string experiment;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  bool list = false;
  app.add_option("experiment", experiment, "Experiment to run (see --list-experiments)");
  app.add_option("--config,-c", config_path, "key = value configuration file");
  app.add_option("--out,-o", out_dir, "Output directory");
  app.add_option("--workers,-j", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed,-s", seed, "PRNG seed for sampled parameters");
  app.add_flag("--list-experiments", list, "Print the available experiments and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (list) {
    for (const auto& name : experiment_names()) std::cout << name << '\n';
    return 0;
  }
  if (experiment.empty()) {
    std::cerr << "error: an experiment name is required (see --list-experiments)\n";
    return 2;
  }
  ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? default_config(experiment) : load_config(config_path, experiment);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (out_dir) cfg.out_dir = *out_dir;
  if (workers) cfg.workers = *workers;
  if (seed) cfg.seed = *seed;
  RunResult result;
  try {
    result = run_experiment(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    write_outputs(cfg, result);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write outputs: " << e.what() << '\n';
    return 2;
  }
  std::size_t fails = 0;
  for (const auto& r : result.rows) fails += r.status == "fail";
  std::cerr << cfg.experiment << ": " << result.rows.size() << " rows, " << fails << " failures -> " << cfg.out_dir
            << '\n';
  return result.exit_code;
}

}  // namespace matpow::harness
