#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loadshift/eval.hpp"
#include "loadshift/models.hpp"
#include "loadshift/recommend.hpp"

namespace loadshift {

/// One structured file drives every command; flags override single fields.
struct RunConfig {
  std::uint64_t seed = 0;
  ModelFamily family = ModelFamily::mlp;

  struct Paths {
    std::string consumption;
    std::string price;
    std::string carbon;
    std::string mapping;
    std::string catalog;
    std::string hourly;       // ingest artifact
    std::string model_store;  // directory of per-target model files
    std::string out_dir;
  } paths;

  TrainingSchedule schedule;
  RecommendationConfig recommend;
  EvalThresholds eval_th;
  std::optional<int> signal_year;
  std::optional<std::string> price_url, carbon_url;
  bool parallel = false;
};

/// Relative paths inside the file resolve against the file's directory.
RunConfig load_run_config(const std::string& path);

void save_run_config(const RunConfig& config, const std::string& path);

/// Serialized snapshot embedded into manifests and reports.
std::string run_config_json(const RunConfig& config);

/// Machine-readable record of one command run: version, config snapshot,
/// FNV-1a hashes of the consumed inputs.
std::string run_manifest(const std::string& command, const RunConfig& config,
                         const std::vector<std::string>& input_paths);

}  // namespace loadshift
