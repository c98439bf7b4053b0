#ifndef CCLAB_CONFIG_HPP
#define CCLAB_CONFIG_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "cclab/harness.hpp"

namespace cclab {

/// Potential-matrix parameters: `count` seeds starting at `seed`, each run at
/// amplitudes {amplitude / 2, amplitude} (one amplitude when it is zero).
struct PotentialMatrix {
  int sphere_degree = 1;
  int torus_kmax = 1;
  double amplitude = 0.1;
  std::uint64_t seed = 0;
  int count = 10;

  void validate() const;
};

/// Top-level run configuration; parses from a single JSON document with
/// unknown keys rejected.
struct RunConfig {
  GridSpec grid{};
  CalibrationClass cls{1.0, 0.0};
  PotentialMatrix potentials{};
  Convention convention = Convention::kStandard;
  std::map<std::string, double> tolerances;
  std::string output_dir = "out";

  void validate() const;
  double tolerance(const std::string& name, double fallback) const;
};

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

/// Expands the potential matrix into the explicit per-sample spec list
/// (seed-major, low amplitude first).
ExperimentConfig experiment_config(const RunConfig& cfg);

} // namespace cclab

#endif
