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

#ifndef DILEMMA_LAB_LEARNERS_H_
#define DILEMMA_LAB_LEARNERS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/policy.h"

namespace dilemma_lab {

struct LearnerConfig {
  std::string id = "q_learning";  // or "reinforce"
  double alpha = 0.1;             // step size for either learner
  double gamma = 0.99;
  double epsilon_start = 0.3;     // q_learning: annealed linearly per stage
  double epsilon_end = 0.02;
  double temperature = 1.0;       // reinforce: softmax temperature
  double initial_value = 0.0;
};

void ValidateLearnerConfig(const LearnerConfig& config);
nlohmann::json LearnerConfigToJson(const LearnerConfig& config);
LearnerConfig LearnerConfigFromJson(const nlohmann::json& j);

// One environment transition as seen by a single learner, with the reward
// already passed through the exchange contract.
struct Transition {
  std::uint64_t obs = 0;
  int action = 0;
  double reward = 0.0;
  std::uint64_t next_obs = 0;
  bool terminal = false;
  int num_actions = 0;
};

// A policy that improves from transitions. Act() follows the behaviour
// policy (with exploration); Greedy() is the exploration-free policy used
// for evaluation. Greedy ties break towards the lowest action index.
class Learner : public Policy {
 public:
  int Act(const MarkovGame& game, const State& state, int player,
          Rng& rng) const final;

  virtual int SelectAction(std::uint64_t obs, int num_actions,
                           Rng& rng) const = 0;
  virtual int Greedy(std::uint64_t obs, int num_actions) const = 0;
  virtual std::vector<double> ActionProbabilities(std::uint64_t obs,
                                                  int num_actions) const = 0;

  // Called before training on a new stage of `episodes` episodes, and before
  // each episode with its index within the stage.
  virtual void BeginStage(int episodes) { stage_episodes_ = episodes; }
  virtual void BeginEpisode(int episode) { episode_ = episode; }
  virtual void Observe(const Transition& transition) = 0;
  virtual void EndEpisode() {}

  virtual nlohmann::json ToJson() const = 0;
  virtual std::unique_ptr<Learner> Clone() const = 0;
  std::unique_ptr<Policy> ClonePolicy() const final { return Clone(); }

 protected:
  // Progress through the current stage, in [0, 1].
  double StageProgress() const;

  int stage_episodes_ = 1;
  int episode_ = 0;
};

using QTable = std::unordered_map<std::uint64_t, std::vector<double>>;

// Q(obs, action) += alpha * (reward + gamma * max_a Q(next_obs, a) *
// (1 - terminal) - Q(obs, action)). Unseen observations are initialised to
// `initial_value`. Returns the updated value.
double QUpdate(QTable& table, const Transition& transition, double alpha,
               double gamma, double initial_value = 0.0);

class QLearner final : public Learner {
 public:
  explicit QLearner(LearnerConfig config);

  int SelectAction(std::uint64_t obs, int num_actions, Rng& rng) const override;
  int Greedy(std::uint64_t obs, int num_actions) const override;
  std::vector<double> ActionProbabilities(std::uint64_t obs,
                                          int num_actions) const override;
  void Observe(const Transition& transition) override;

  nlohmann::json ToJson() const override;
  static std::unique_ptr<QLearner> FromJson(const nlohmann::json& j);
  std::unique_ptr<Learner> Clone() const override;
  std::string Describe() const override { return "q_learning"; }

  double Epsilon() const;
  const QTable& table() const { return table_; }
  // Q-values for obs, or initial values when unseen.
  std::vector<double> Values(std::uint64_t obs, int num_actions) const;

 private:
  LearnerConfig config_;
  QTable table_;
};

// REINFORCE over a tabular softmax, with a per-observation value baseline.
class ReinforceLearner final : public Learner {
 public:
  explicit ReinforceLearner(LearnerConfig config);

  int SelectAction(std::uint64_t obs, int num_actions, Rng& rng) const override;
  int Greedy(std::uint64_t obs, int num_actions) const override;
  std::vector<double> ActionProbabilities(std::uint64_t obs,
                                          int num_actions) const override;
  void Observe(const Transition& transition) override;
  void EndEpisode() override;

  nlohmann::json ToJson() const override;
  static std::unique_ptr<ReinforceLearner> FromJson(const nlohmann::json& j);
  std::unique_ptr<Learner> Clone() const override;
  std::string Describe() const override { return "reinforce"; }

 private:
  LearnerConfig config_;
  QTable preferences_;
  std::unordered_map<std::uint64_t, double> baseline_;
  std::vector<Transition> trajectory_;
};

std::unique_ptr<Learner> MakeLearner(const LearnerConfig& config);
std::unique_ptr<Learner> LearnerFromJson(const nlohmann::json& j);

// Exploration-free policy backed by a learner. View() does not extend the
// learner's lifetime; the shared_ptr constructor does.
class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(std::shared_ptr<const Learner> learner)
      : learner_(std::move(learner)) {}
  static GreedyPolicy View(const Learner& learner) {
    return GreedyPolicy(std::shared_ptr<const Learner>(
        std::shared_ptr<const Learner>(), &learner));
  }

  int Act(const MarkovGame& game, const State& state, int player,
          Rng&) const override {
    return learner_->Greedy(game.Observe(state, player),
                            game.num_actions(player));
  }
  std::unique_ptr<Policy> ClonePolicy() const override {
    return std::make_unique<GreedyPolicy>(learner_);
  }
  std::string Describe() const override {
    return "greedy(" + learner_->Describe() + ")";
  }
  const Learner& learner() const { return *learner_; }

 private:
  std::shared_ptr<const Learner> learner_;
};

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_LEARNERS_H_
