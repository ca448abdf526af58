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

#ifndef DILEMMA_LAB_ESTIMATOR_H_
#define DILEMMA_LAB_ESTIMATOR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/learners.h"
#include "dilemma_lab/registry.h"
#include "dilemma_lab/stats.h"
#include "dilemma_lab/training.h"

namespace dilemma_lab {

// True iff 1/n <= s <= 1.
bool BoundCheck(double s, int n);
inline bool BoundCheck(const SelfInterest& s, int n) {
  return BoundCheck(s.value(), n);
}

struct EstimatorConfig {
  EnvironmentSpec environment;
  LearnerConfig learner;
  // Player counts of the s = 1 curriculum; empty selects 1..n, or just n
  // for fixed-arity games (matrix, pgg).
  std::vector<int> pretrain_counts;
  int pretrain_episodes = 2000;
  // Self-interest values to compare, including 1. Empty selects 1 followed
  // by the default exchange-ratio schedule. The s = 1 group is the final
  // pretraining stage; the others are trained in decreasing order.
  std::vector<double> s_values;
  int episodes_per_stage = 2000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  double alpha = 0.1;
  double final_window_fraction = 0.05;
  double collapse_ratio = 0.5;
  // Per-arm budget of ValidateWithoutCurriculum.
  int validation_episodes = 4000;
  int jobs = 1;
  DunnettOptions dunnett;
};

// Resolves defaults and validates every precondition. Throws
// std::invalid_argument naming the offending field.
EstimatorConfig ResolveConfig(const EstimatorConfig& config);

// Curriculum followed by the descent over s < 1.
std::vector<StagePlan> EstimationPlans(const EstimatorConfig& resolved);
std::vector<StagePlan> PretrainPlans(const EstimatorConfig& resolved);

// Trains `plans` for every seed, up to `jobs` seeds in parallel. `store`
// must tolerate concurrent calls for distinct seeds.
std::vector<TrainingRun> RunSeeds(const EstimatorConfig& resolved,
                                  const std::vector<StagePlan>& plans,
                                  StageStore* store = nullptr,
                                  std::uint64_t stream = 0);

struct NonInferiority {
  double reference_s = 0.0;
  double reference_mean = 0.0;
  double candidate_mean = 0.0;
  double p = 1.0;  // one-sided test of candidate < reference
  bool non_inferior = true;
};

struct AuditViolation {
  double higher_s = 0.0;
  double p = 0.0;
};

struct EstimationReport {
  std::string game;
  int num_players = 0;
  std::vector<double> schedule;  // decreasing, starting at 1
  std::vector<GroupSample> samples;
  Selection selection;
  NonInferiority team_reference;  // s* against the smallest tested s
  std::vector<AuditViolation> audit_violations;
  // collapsed[k][i]: stage k of seed i tripped the collapse detector.
  std::vector<std::string> stage_labels;
  std::vector<std::vector<bool>> collapsed;
  std::vector<std::uint64_t> seeds;
  double alpha = 0.1;
  double wall_seconds = 0.0;  // excluded from the JSON report
};

// Groups the runs' final-window welfare by s and selects s*.
EstimationReport BuildReport(const EstimatorConfig& resolved,
                             const std::vector<StagePlan>& plans,
                             const std::vector<TrainingRun>& runs);

// Full pipeline: curriculum, descent and selection.
EstimationReport EstimateMarkov(const EstimatorConfig& config,
                                StageStore* store = nullptr,
                                std::vector<TrainingRun>* runs = nullptr);

nlohmann::json EstimationReportToJson(const EstimationReport& report);
EstimationReport EstimationReportFromJson(const nlohmann::json& j);

struct ValidationArm {
  std::string name;  // "selfish", "s_star", "s_plus", "team"
  double s = 1.0;
  std::vector<std::vector<double>> trajectories;  // per seed
  GroupSample final;                              // final-window welfare
};

struct ValidationReport {
  std::vector<ValidationArm> arms;
  int control_arm = 0;  // arm with the largest final mean
  DunnettResult dunnett;  // treatments in arm order, control skipped
  int episodes = 0;
};

using ArmStoreProvider = std::function<StageStore*(int arm)>;

// Trains every arm {1, s*, s+, 1/n} from the single-player pretraining
// checkpoint with identical budgets and seeds. `prior` supplies s* and its
// bracket; s+ is the bracket's upper end.
ValidationReport ValidateWithoutCurriculum(
    const EstimatorConfig& config, const EstimationReport& prior,
    const ArmStoreProvider& stores = {});

nlohmann::json ValidationReportToJson(const ValidationReport& report);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_ESTIMATOR_H_
