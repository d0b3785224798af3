#pragma once

#include "demonsim/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace demonsim {

/// Run configuration. JSON keys mirror the field names; unknown keys are
/// rejected. Times are in seconds.
struct RunConfig {
  int experiment = 1;
  Mode mode = Mode::Analytic;
  std::optional<Observer> observer;      // experiment 3
  std::optional<DetectionBasis> basis;   // experiment 2
  std::optional<NoiseParams> noise;      // absent = ideal gates
  Calibration calibration{};
  int n_resamples = 1000;
  std::uint64_t seed = 1;
  double s_initial_ref = 0.90;
  std::string out_dir = ".";
  bool emit_datasets = false;

  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

/// Hex FNV-1a hash of the canonical config serialization.
std::string config_hash(const RunConfig& config);

std::string version_string();

/// Runs the configured experiment and writes report.json / report.csv
/// (plus datasets.json when requested) into config.out_dir. The JSON
/// report carries a reproducibility block; identical config and seed give
/// byte-identical files. Returns the report.
ExperimentReport run(const RunConfig& config);

}  // namespace demonsim
