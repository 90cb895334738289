// Experiment runner for the random-marked-closed-set library.
//
//   rmcs_cli --experiment <name> [--config cfg.json] [--out dir]
//            [--seed N] [--replicates N] [--tolerance-scale X] [--workers N]
//
// Exit status: 0 if every check in the run manifest passed, 1 if any check
// failed, 2 on configuration or runtime errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmcs/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"second-order analysis experiments for random marked closed sets"};

  std::string experiment;
  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed = -1;
  std::int64_t replicates = -1;
  double tolerance_scale = -1.0;
  int workers = -1;

  std::ostringstream names;
  for (const auto& n : rmcs::experiments::experiment_names()) names << "\n  " << n;
  app.add_option("--experiment", experiment, "experiment to run, one of:" + names.str())
      ->required();
  app.add_option("--config", config_path, "JSON config file overlaid on the defaults");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed, "master RNG seed (overrides config)");
  app.add_option("--replicates", replicates, "replicate count (overrides config)");
  app.add_option("--tolerance-scale", tolerance_scale,
                 "multiply all absolute check tolerances (overrides config)");
  app.add_option("--workers", workers, "sampling threads; results do not depend on this");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json config = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::runtime_error("cannot read config file: " + config_path);
      is >> config;
      if (!config.is_object()) throw std::runtime_error("config root must be a JSON object");
    }
    if (seed >= 0) config["seed"] = seed;
    if (replicates >= 0) config["replicates"] = replicates;
    if (tolerance_scale >= 0) config["tolerance_scale"] = tolerance_scale;
    if (workers >= 0) config["workers"] = workers;

    const rmcs::experiments::RunManifest manifest =
        rmcs::experiments::run_experiment(experiment, config, out_dir);

    for (const auto& c : manifest.checks) {
      std::printf("[%s] %s: measured=%.10g expected=%.10g tol=%.3g%s%s\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.expected, c.tolerance,
                  c.note.empty() ? "" : " -- ", c.note.c_str());
    }
    std::printf("%s: %zu checks, %s (%.2fs) -> %s/manifest.json\n", experiment.c_str(),
                manifest.checks.size(), manifest.all_pass() ? "all passed" : "FAILURES",
                manifest.wall_seconds, out_dir.c_str());
    return manifest.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
