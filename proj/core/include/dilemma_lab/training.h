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

#ifndef DILEMMA_LAB_TRAINING_H_
#define DILEMMA_LAB_TRAINING_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/learners.h"
#include "dilemma_lab/registry.h"
#include "dilemma_lab/reward_exchange.h"

namespace dilemma_lab {

using LearnerSet = std::vector<std::unique_ptr<Learner>>;

// Runs `episodes` training episodes. Every learner updates on its
// exchange-transformed per-step reward; the returned trajectory holds the
// undiscounted collective reward of each episode. With a single player the
// exchange is skipped.
std::vector<double> TrainStage(const MarkovGame& game, LearnerSet& learners,
                               SelfInterest s, int episodes, Rng& rng);

// Mean of the trailing max(1, ceil(fraction * size)) entries.
double FinalWindowMean(std::span<const double> welfare, double fraction = 0.05);

// True when the final-window mean falls below `ratio` times the best
// window mean seen during the stage.
bool DetectCollapse(std::span<const double> welfare, double fraction = 0.05,
                    double ratio = 0.5);

struct StagePlan {
  std::string label;
  int num_players = 1;
  double s = 1.0;
  int episodes = 0;
  bool pretrain = false;
};

struct StageRecord {
  StagePlan plan;
  std::vector<double> welfare;
  double final_window_mean = 0.0;
  bool collapsed = false;
  // {"learners": [...], "rng": "<engine state>"} after the stage.
  nlohmann::json checkpoint;
};

nlohmann::json StageRecordToJson(const StageRecord& record);
StageRecord StageRecordFromJson(const nlohmann::json& j);

struct TrainingRun {
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
};

// Persistence hook for RunStages. Load returns a previously saved record for
// (seed, stage index), which lets an interrupted run resume.
class StageStore {
 public:
  virtual ~StageStore() = default;
  virtual std::optional<StageRecord> Load(std::uint64_t seed, int index) = 0;
  virtual void Save(std::uint64_t seed, int index,
                    const StageRecord& record) = 0;
};

// Restores learners and the RNG from a StageRecord checkpoint.
LearnerSet LearnersFromCheckpoint(const nlohmann::json& checkpoint);
Rng RngFromCheckpoint(const nlohmann::json& checkpoint);

struct RunOptions {
  double final_window_fraction = 0.05;
  double collapse_ratio = 0.5;
  // Stream index mixed into the seed; distinct pipelines over the same seeds
  // use distinct streams.
  std::uint64_t stream = 0;
};

// Trains sequentially through `plans`, carrying learners forward. When a
// stage has more players than the current learner set, the new slots clone
// learner 0. `initial` seeds the learner set (empty: fresh learners).
TrainingRun RunStages(const GameFactory& factory,
                      std::span<const StagePlan> plans,
                      const LearnerConfig& config, std::uint64_t seed,
                      StageStore* store = nullptr, LearnerSet initial = {},
                      const RunOptions& options = {});

// Pretraining: s = 1 at each player count in `player_counts`.
std::vector<StagePlan> CurriculumPlans(std::span<const int> player_counts,
                                       int episodes_per_stage);
// Training: decreasing self-interest at a fixed player count.
std::vector<StagePlan> DescentPlans(int num_players,
                                    std::span<const double> s_stages,
                                    int episodes_per_stage);

TrainingRun PretrainCurriculum(const GameFactory& factory,
                               std::span<const int> player_counts,
                               int episodes_per_stage,
                               const LearnerConfig& config, std::uint64_t seed);

// Continues `learners` through the s stages, in memory.
std::vector<StageRecord> TrainSelfInterestDescent(
    const MarkovGame& game, LearnerSet& learners,
    std::span<const double> s_stages, int episodes_per_stage, Rng& rng,
    const RunOptions& options = {});

struct Evaluation {
  std::vector<double> mean_returns;
  std::vector<double> mean_undiscounted_returns;
  double collective_mean = 0.0;
  double collective_sd = 0.0;
  int episodes = 0;
};

Evaluation Evaluate(const MarkovGame& game,
                    std::span<const Policy* const> policies, int episodes,
                    Rng& rng);

// Evaluates the greedy policies of `learners`.
Evaluation EvaluateGreedy(const MarkovGame& game, const LearnerSet& learners,
                          int episodes, Rng& rng);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_TRAINING_H_
