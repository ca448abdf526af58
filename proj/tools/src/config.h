// Copyright 2026 The Dilemma Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DILEMMA_LAB_TOOLS_CONFIG_H_
#define DILEMMA_LAB_TOOLS_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dilemma_lab/estimator.h"

namespace dilemma_lab::cli {

// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchellingSettings {
  int episodes_per_cell = 225;
  double tolerance = 2.0;
};

struct ExperimentConfig {
  std::string name;
  EstimatorConfig estimator;  // resolved
  int evaluation_episodes = 100;
  SchellingSettings schelling;
  std::string output_dir = "runs";
};

// Parses YAML (JSON is accepted as a subset) into the generic tree.
nlohmann::json ReadStructuredFile(const std::filesystem::path& path);

// Validates `tree` against the experiment schema and every module's
// preconditions. Unknown keys are rejected. Throws ConfigError naming the
// offending field.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& tree,
                                       const std::string& default_name);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Canonical, fully resolved form; stored as config.json in run directories.
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace dilemma_lab::cli

#endif  // DILEMMA_LAB_TOOLS_CONFIG_H_
