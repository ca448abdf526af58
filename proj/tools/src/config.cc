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

#include "config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dilemma_lab/reward_exchange.h"

namespace dilemma_lab::cli {
namespace {

using nlohmann::json;

json ScalarToJson(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  // Quoted scalars carry the non-specific tag "!" and stay strings.
  if (node.Tag() == "!") return text;
  if (text == "null" || text == "~" || text.empty()) return nullptr;
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return text;
}

json YamlToJson(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return ScalarToJson(node);
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(YamlToJson(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) {
        out[kv.first.as<std::string>()] = YamlToJson(kv.second);
      }
      return out;
    }
  }
  return nullptr;
}

void RejectUnknown(const json& obj, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a mapping");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) {
      throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") +
                        key + "'");
    }
  }
}

template <typename T>
void Get(const json& obj, const char* key, const std::string& where, T& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + where + key + "' has the wrong type");
  }
}

}  // namespace

json ReadStructuredFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return YamlToJson(YAML::Load(buffer.str()));
  } catch (const YAML::Exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
}

ExperimentConfig ParseExperimentConfig(const json& tree,
                                       const std::string& default_name) {
  if (!tree.is_object()) throw ConfigError("config must be a mapping");
  RejectUnknown(tree, "",
                {"name", "environment", "learner", "schedule", "seeds",
                 "evaluation_episodes", "alpha", "final_window_fraction",
                 "collapse_ratio", "validation_episodes", "dunnett_draws",
                 "jobs", "schelling", "output_dir"});
  ExperimentConfig c;
  c.name = default_name;
  Get(tree, "name", "", c.name);
  if (c.name.empty() || c.name.find('/') != std::string::npos) {
    throw ConfigError("field 'name' must be a non-empty path component");
  }
  EstimatorConfig& e = c.estimator;

  if (!tree.contains("environment")) {
    throw ConfigError("missing field 'environment'");
  }
  const json& env = tree.at("environment");
  RejectUnknown(env, "environment", {"id", "num_players", "params"});
  if (!env.contains("id")) throw ConfigError("missing field 'environment.id'");
  Get(env, "id", "environment.", e.environment.id);
  Get(env, "num_players", "environment.", e.environment.num_players);
  if (env.contains("params")) e.environment.params = env.at("params");

  if (tree.contains("learner")) {
    try {
      e.learner = LearnerConfigFromJson(tree.at("learner"));
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("learner: ") + ex.what());
    }
  }

  std::vector<std::string> ratios;
  if (tree.contains("schedule")) {
    const json& s = tree.at("schedule");
    RejectUnknown(s, "schedule",
                  {"player_counts", "pretrain_episodes", "s_values", "ratios",
                   "episodes_per_stage"});
    Get(s, "player_counts", "schedule.", e.pretrain_counts);
    Get(s, "pretrain_episodes", "schedule.", e.pretrain_episodes);
    Get(s, "s_values", "schedule.", e.s_values);
    Get(s, "ratios", "schedule.", ratios);
    Get(s, "episodes_per_stage", "schedule.", e.episodes_per_stage);
    if (!ratios.empty() && !e.s_values.empty()) {
      throw ConfigError("schedule: give either 's_values' or 'ratios'");
    }
  }

  if (tree.contains("seeds")) {
    const json& seeds = tree.at("seeds");
    if (seeds.is_number_integer()) {
      const int count = seeds.get<int>();
      if (count < 1) throw ConfigError("field 'seeds' must be positive");
      e.seeds.clear();
      for (int i = 0; i < count; ++i) e.seeds.push_back(i);
    } else {
      Get(tree, "seeds", "", e.seeds);
    }
  }
  Get(tree, "evaluation_episodes", "", c.evaluation_episodes);
  Get(tree, "alpha", "", e.alpha);
  Get(tree, "final_window_fraction", "", e.final_window_fraction);
  Get(tree, "collapse_ratio", "", e.collapse_ratio);
  Get(tree, "validation_episodes", "", e.validation_episodes);
  Get(tree, "dunnett_draws", "", e.dunnett.draws);
  Get(tree, "jobs", "", e.jobs);
  Get(tree, "output_dir", "", c.output_dir);
  if (tree.contains("schelling")) {
    const json& s = tree.at("schelling");
    RejectUnknown(s, "schelling", {"episodes_per_cell", "tolerance"});
    Get(s, "episodes_per_cell", "schelling.", c.schelling.episodes_per_cell);
    Get(s, "tolerance", "schelling.", c.schelling.tolerance);
  }
  if (c.evaluation_episodes < 0) {
    throw ConfigError("field 'evaluation_episodes' must be >= 0");
  }
  if (c.schelling.episodes_per_cell < 1) {
    throw ConfigError("field 'schelling.episodes_per_cell' must be >= 1");
  }
  if (!(c.schelling.tolerance >= 0.0)) {
    throw ConfigError("field 'schelling.tolerance' must be >= 0");
  }

  try {
    if (!ratios.empty()) {
      const int n = ResolvedPlayerCount(e.environment);
      e.s_values = {1.0};
      for (const auto& r : ratios) {
        e.s_values.push_back(
            RatioToSelfInterest(ExchangeRatio::Parse(r), n).value());
      }
    }
    e = ResolveConfig(e);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  return ParseExperimentConfig(ReadStructuredFile(path),
                               path.stem().string());
}

json ExperimentConfigToJson(const ExperimentConfig& c) {
  const EstimatorConfig& e = c.estimator;
  return {{"name", c.name},
          {"environment",
           {{"id", e.environment.id},
            {"num_players", e.environment.num_players},
            {"params", e.environment.params}}},
          {"learner", LearnerConfigToJson(e.learner)},
          {"schedule",
           {{"player_counts", e.pretrain_counts},
            {"pretrain_episodes", e.pretrain_episodes},
            {"s_values", e.s_values},
            {"episodes_per_stage", e.episodes_per_stage}}},
          {"seeds", e.seeds},
          {"evaluation_episodes", c.evaluation_episodes},
          {"alpha", e.alpha},
          {"final_window_fraction", e.final_window_fraction},
          {"collapse_ratio", e.collapse_ratio},
          {"validation_episodes", e.validation_episodes},
          {"dunnett_draws", e.dunnett.draws},
          {"schelling",
           {{"episodes_per_cell", c.schelling.episodes_per_cell},
            {"tolerance", c.schelling.tolerance}}}};
}

}  // namespace dilemma_lab::cli
