#pragma once

#include <string>
#include <vector>

#include "distal/serialize.hpp"

namespace distal {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string name;
  std::string operation;
  Json params = Json::object();
  std::string out_dir;

  // Errors: cli.schema.
  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
};

struct RunResult {
  int status = 0;
  std::vector<std::string> artifacts;  // file names inside out_dir, manifest excluded
  Json summary;
};

struct PresetInfo {
  std::string id;
  std::string operation;
  std::string description;
};

const std::vector<std::string>& operations();
const std::vector<PresetInfo>& presets();
// Errors: cli.unknown_preset.
ExperimentConfig preset_config(const std::string& id, const std::string& out_dir);

// Runs the operation, writes its artifacts plus summary.json and
// manifest.json (config hash, version, wall time) into out_dir. Everything
// except the manifest is byte-reproducible.
RunResult run(const ExperimentConfig& config);

std::string config_hash(const ExperimentConfig& config);

}  // namespace distal
