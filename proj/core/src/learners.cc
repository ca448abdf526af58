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

#include "dilemma_lab/learners.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dilemma_lab {
namespace {

using nlohmann::json;

int ArgMaxLowest(const std::vector<double>& values) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(values.size()); ++a) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

std::vector<double>& Row(QTable& table, std::uint64_t obs, int num_actions,
                         double init) {
  auto [it, inserted] = table.try_emplace(obs);
  if (inserted || static_cast<int>(it->second.size()) != num_actions) {
    it->second.resize(num_actions, init);
  }
  return it->second;
}

json TableToJson(const QTable& table) {
  std::vector<std::uint64_t> keys;
  keys.reserve(table.size());
  for (const auto& [k, v] : table) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  json rows = json::array();
  for (auto k : keys) rows.push_back(json::array({k, table.at(k)}));
  return rows;
}

QTable TableFromJson(const json& rows) {
  QTable table;
  for (const auto& row : rows) {
    table.emplace(row.at(0).get<std::uint64_t>(),
                  row.at(1).get<std::vector<double>>());
  }
  return table;
}

std::vector<double> Softmax(const std::vector<double>& prefs,
                            double temperature) {
  const double top = *std::max_element(prefs.begin(), prefs.end());
  std::vector<double> p(prefs.size());
  double z = 0.0;
  for (std::size_t a = 0; a < prefs.size(); ++a) {
    p[a] = std::exp((prefs[a] - top) / temperature);
    z += p[a];
  }
  for (double& x : p) x /= z;
  return p;
}

int SampleCategorical(const std::vector<double>& probs, Rng& rng) {
  const double u = Uniform01(rng);
  double acc = 0.0;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    acc += probs[a];
    if (u < acc) return a;
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

void ValidateLearnerConfig(const LearnerConfig& c) {
  if (c.id != "q_learning" && c.id != "reinforce") {
    throw std::invalid_argument("learner: unknown id '" + c.id + "'");
  }
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
    throw std::invalid_argument("learner: alpha outside [0, 1]");
  }
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) {
    throw std::invalid_argument("learner: gamma outside (0, 1]");
  }
  if (!(c.epsilon_start >= 0.0 && c.epsilon_start <= 1.0 &&
        c.epsilon_end >= 0.0 && c.epsilon_end <= 1.0)) {
    throw std::invalid_argument("learner: epsilon outside [0, 1]");
  }
  if (!(c.temperature > 0.0)) {
    throw std::invalid_argument("learner: temperature must be positive");
  }
}

json LearnerConfigToJson(const LearnerConfig& c) {
  return json{{"id", c.id},
              {"alpha", c.alpha},
              {"gamma", c.gamma},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_end", c.epsilon_end},
              {"temperature", c.temperature},
              {"initial_value", c.initial_value}};
}

LearnerConfig LearnerConfigFromJson(const json& j) {
  static const char* kKeys[] = {"id",          "alpha",       "gamma",
                                "epsilon_start", "epsilon_end", "temperature",
                                "initial_value"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw std::invalid_argument("learner: unknown key '" + key + "'");
    }
  }
  LearnerConfig c;
  c.id = j.value("id", c.id);
  c.alpha = j.value("alpha", c.alpha);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon_start = j.value("epsilon_start", c.epsilon_start);
  c.epsilon_end = j.value("epsilon_end", c.epsilon_end);
  c.temperature = j.value("temperature", c.temperature);
  c.initial_value = j.value("initial_value", c.initial_value);
  ValidateLearnerConfig(c);
  return c;
}

int Learner::Act(const MarkovGame& game, const State& state, int player,
                 Rng& rng) const {
  return SelectAction(game.Observe(state, player), game.num_actions(player),
                      rng);
}

double Learner::StageProgress() const {
  if (stage_episodes_ <= 1) return 1.0;
  return std::clamp(static_cast<double>(episode_) / (stage_episodes_ - 1), 0.0,
                    1.0);
}

double QUpdate(QTable& table, const Transition& t, double alpha, double gamma,
               double initial_value) {
  double bootstrap = 0.0;
  if (!t.terminal) {
    const auto& next = Row(table, t.next_obs, t.num_actions, initial_value);
    bootstrap = *std::max_element(next.begin(), next.end());
  }
  auto& row = Row(table, t.obs, t.num_actions, initial_value);
  double& q = row[t.action];
  q += alpha * (t.reward + gamma * bootstrap - q);
  return q;
}

QLearner::QLearner(LearnerConfig config) : config_(std::move(config)) {
  ValidateLearnerConfig(config_);
}

double QLearner::Epsilon() const {
  return config_.epsilon_start +
         (config_.epsilon_end - config_.epsilon_start) * StageProgress();
}

std::vector<double> QLearner::Values(std::uint64_t obs,
                                     int num_actions) const {
  auto it = table_.find(obs);
  if (it == table_.end() || static_cast<int>(it->second.size()) != num_actions) {
    return std::vector<double>(num_actions, config_.initial_value);
  }
  return it->second;
}

int QLearner::Greedy(std::uint64_t obs, int num_actions) const {
  return ArgMaxLowest(Values(obs, num_actions));
}

int QLearner::SelectAction(std::uint64_t obs, int num_actions,
                           Rng& rng) const {
  if (Bernoulli(rng, Epsilon())) return UniformInt(rng, num_actions);
  return Greedy(obs, num_actions);
}

std::vector<double> QLearner::ActionProbabilities(std::uint64_t obs,
                                                  int num_actions) const {
  const double eps = Epsilon();
  std::vector<double> p(num_actions, eps / num_actions);
  p[Greedy(obs, num_actions)] += 1.0 - eps;
  return p;
}

void QLearner::Observe(const Transition& transition) {
  QUpdate(table_, transition, config_.alpha, config_.gamma,
          config_.initial_value);
}

json QLearner::ToJson() const {
  return json{{"type", "q_learning"},
              {"config", LearnerConfigToJson(config_)},
              {"stage_episodes", stage_episodes_},
              {"episode", episode_},
              {"table", TableToJson(table_)}};
}

std::unique_ptr<QLearner> QLearner::FromJson(const json& j) {
  auto learner =
      std::make_unique<QLearner>(LearnerConfigFromJson(j.at("config")));
  learner->stage_episodes_ = j.at("stage_episodes").get<int>();
  learner->episode_ = j.at("episode").get<int>();
  learner->table_ = TableFromJson(j.at("table"));
  return learner;
}

std::unique_ptr<Learner> QLearner::Clone() const {
  return std::make_unique<QLearner>(*this);
}

ReinforceLearner::ReinforceLearner(LearnerConfig config)
    : config_(std::move(config)) {
  ValidateLearnerConfig(config_);
}

std::vector<double> ReinforceLearner::ActionProbabilities(
    std::uint64_t obs, int num_actions) const {
  auto it = preferences_.find(obs);
  if (it == preferences_.end() ||
      static_cast<int>(it->second.size()) != num_actions) {
    return std::vector<double>(num_actions, 1.0 / num_actions);
  }
  return Softmax(it->second, config_.temperature);
}

int ReinforceLearner::SelectAction(std::uint64_t obs, int num_actions,
                                   Rng& rng) const {
  return SampleCategorical(ActionProbabilities(obs, num_actions), rng);
}

int ReinforceLearner::Greedy(std::uint64_t obs, int num_actions) const {
  auto it = preferences_.find(obs);
  if (it == preferences_.end()) return 0;
  return ArgMaxLowest(it->second);
}

void ReinforceLearner::Observe(const Transition& transition) {
  trajectory_.push_back(transition);
}

void ReinforceLearner::EndEpisode() {
  double ret = 0.0;
  for (auto it = trajectory_.rbegin(); it != trajectory_.rend(); ++it) {
    ret = it->reward + config_.gamma * ret;
    double& baseline = baseline_[it->obs];
    const double advantage = ret - baseline;
    baseline += config_.alpha * advantage;
    const auto probs = ActionProbabilities(it->obs, it->num_actions);
    auto& prefs = Row(preferences_, it->obs, it->num_actions, 0.0);
    for (int a = 0; a < it->num_actions; ++a) {
      const double indicator = (a == it->action) ? 1.0 : 0.0;
      prefs[a] += config_.alpha * advantage * (indicator - probs[a]) /
                  config_.temperature;
    }
  }
  trajectory_.clear();
}

json ReinforceLearner::ToJson() const {
  std::vector<std::uint64_t> keys;
  for (const auto& [k, v] : baseline_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  json baseline = json::array();
  for (auto k : keys) baseline.push_back(json::array({k, baseline_.at(k)}));
  return json{{"type", "reinforce"},
              {"config", LearnerConfigToJson(config_)},
              {"stage_episodes", stage_episodes_},
              {"episode", episode_},
              {"preferences", TableToJson(preferences_)},
              {"baseline", baseline}};
}

std::unique_ptr<ReinforceLearner> ReinforceLearner::FromJson(const json& j) {
  auto learner =
      std::make_unique<ReinforceLearner>(LearnerConfigFromJson(j.at("config")));
  learner->stage_episodes_ = j.at("stage_episodes").get<int>();
  learner->episode_ = j.at("episode").get<int>();
  learner->preferences_ = TableFromJson(j.at("preferences"));
  for (const auto& row : j.at("baseline")) {
    learner->baseline_.emplace(row.at(0).get<std::uint64_t>(),
                               row.at(1).get<double>());
  }
  return learner;
}

std::unique_ptr<Learner> ReinforceLearner::Clone() const {
  return std::make_unique<ReinforceLearner>(*this);
}

std::unique_ptr<Learner> MakeLearner(const LearnerConfig& config) {
  ValidateLearnerConfig(config);
  if (config.id == "reinforce") return std::make_unique<ReinforceLearner>(config);
  return std::make_unique<QLearner>(config);
}

std::unique_ptr<Learner> LearnerFromJson(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "q_learning") return QLearner::FromJson(j);
  if (type == "reinforce") return ReinforceLearner::FromJson(j);
  throw std::invalid_argument("checkpoint: unknown learner type '" + type + "'");
}

}  // namespace dilemma_lab
