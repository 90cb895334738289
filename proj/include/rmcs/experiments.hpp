#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmcs/definiteness.hpp"
#include "rmcs/monotonicity.hpp"

namespace rmcs::experiments {

inline constexpr const char* kCodeVersion = "rmcs 1.0.0";

struct CheckResult {
  std::string name;
  double measured = 0;
  double expected = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

struct RunManifest {
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::string code_version = kCodeVersion;
  double wall_seconds = 0;
  std::string config_dump;  // effective config (defaults + overrides), canonical JSON
  std::vector<CheckResult> checks;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

// Experiment names: theory-t0, general-t, derivative-check, definiteness,
// monotonicity, periodic-example, segment-singleton, grf-empirical.
const std::vector<std::string>& experiment_names();

// Runs the named pipeline with `config` overlaid on the experiment's
// defaults (unknown keys rejected; schema in docs/config.md), writes CSV
// curves, JSON reports and manifest.json into out_dir, and returns the
// manifest.  Check tolerances scale with config key "tolerance_scale".
RunManifest run_experiment(const std::string& name, const nlohmann::json& config,
                           const std::string& out_dir);

// Figure data: one CSV per panel with columns rho, f_t, f_t_prime (central
// differences on the rho grid).
struct PlotPanel {
  double t = 0;
  std::vector<double> rho;
  std::vector<double> f;
};
void emit_plot_data(const std::vector<PlotPanel>& panels, const std::string& out_dir);

nlohmann::json report_to_json(const mono::MonotonicityReport& rep);
nlohmann::json report_to_json(const definiteness::DefinitenessReport& rep);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace rmcs::experiments
