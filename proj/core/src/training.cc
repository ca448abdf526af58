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

#include "dilemma_lab/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dilemma_lab {
namespace {

using nlohmann::json;

int WindowSize(std::size_t size, double fraction) {
  return std::max(1, static_cast<int>(std::ceil(fraction * size)));
}

json CheckpointJson(const LearnerSet& learners, const Rng& rng) {
  json list = json::array();
  for (const auto& l : learners) list.push_back(l->ToJson());
  return json{{"learners", std::move(list)}, {"rng", SerializeRng(rng)}};
}

StageRecord RunOneStage(const MarkovGame& game, LearnerSet& learners,
                        const StagePlan& plan, Rng& rng,
                        const RunOptions& options) {
  const int n = game.num_players();
  const SelfInterest s =
      n >= 2 ? SelfInterest(plan.s, n) : SelfInterest::Selfish(1);
  StageRecord record;
  record.plan = plan;
  record.welfare = TrainStage(game, learners, s, plan.episodes, rng);
  if (!record.welfare.empty()) {
    record.final_window_mean =
        FinalWindowMean(record.welfare, options.final_window_fraction);
    record.collapsed = DetectCollapse(
        record.welfare, options.final_window_fraction, options.collapse_ratio);
  }
  record.checkpoint = CheckpointJson(learners, rng);
  return record;
}

}  // namespace

std::vector<double> TrainStage(const MarkovGame& game, LearnerSet& learners,
                               SelfInterest s, int episodes, Rng& rng) {
  const int n = game.num_players();
  if (static_cast<int>(learners.size()) != n) {
    throw std::invalid_argument("TrainStage: need one learner per player");
  }
  if (episodes == 0) return {};
  const bool exchange = n >= 2 && s.value() < 1.0;
  if (exchange && s.num_players() != n) {
    throw std::invalid_argument("TrainStage: self-interest built for wrong n");
  }
  std::vector<double> welfare;
  welfare.reserve(std::max(episodes, 0));
  for (auto& l : learners) l->BeginStage(episodes);

  std::vector<int> joint(n);
  std::vector<std::uint64_t> obs(n);
  std::vector<double> rewards(n);
  for (int e = 0; e < episodes; ++e) {
    for (auto& l : learners) l->BeginEpisode(e);
    State state = game.Reset(rng);
    double collective = 0.0;
    for (int i = 0; i < n; ++i) obs[i] = game.Observe(state, i);
    while (!state.terminal) {
      for (int i = 0; i < n; ++i) {
        joint[i] = learners[i]->SelectAction(obs[i], game.num_actions(i), rng);
      }
      StepOutcome out = game.Step(state, joint, rng);
      rewards = out.rewards;
      collective += UtilitarianWelfare(rewards);
      if (exchange) ExchangeInPlace(rewards, s);
      for (int i = 0; i < n; ++i) {
        const std::uint64_t next = game.Observe(out.next_state, i);
        learners[i]->Observe(Transition{obs[i], joint[i], rewards[i], next,
                                        out.terminal, game.num_actions(i)});
        obs[i] = next;
      }
      state = std::move(out.next_state);
    }
    for (auto& l : learners) l->EndEpisode();
    welfare.push_back(collective);
  }
  return welfare;
}

double FinalWindowMean(std::span<const double> welfare, double fraction) {
  if (welfare.empty()) throw std::invalid_argument("FinalWindowMean: empty");
  const int w = WindowSize(welfare.size(), fraction);
  const auto tail = welfare.last(w);
  return std::accumulate(tail.begin(), tail.end(), 0.0) / w;
}

bool DetectCollapse(std::span<const double> welfare, double fraction,
                    double ratio) {
  if (welfare.empty()) return false;
  const int w = WindowSize(welfare.size(), fraction);
  double window = std::accumulate(welfare.begin(), welfare.begin() + w, 0.0);
  double best = window;
  for (std::size_t i = w; i < welfare.size(); ++i) {
    window += welfare[i] - welfare[i - w];
    best = std::max(best, window);
  }
  const double final_mean = FinalWindowMean(welfare, fraction);
  return best > 0.0 && final_mean < ratio * best / w;
}

json StageRecordToJson(const StageRecord& r) {
  return json{{"label", r.plan.label},
              {"num_players", r.plan.num_players},
              {"s", r.plan.s},
              {"episodes", r.plan.episodes},
              {"pretrain", r.plan.pretrain},
              {"welfare", r.welfare},
              {"final_window_mean", r.final_window_mean},
              {"collapsed", r.collapsed},
              {"checkpoint", r.checkpoint}};
}

StageRecord StageRecordFromJson(const json& j) {
  StageRecord r;
  r.plan.label = j.at("label").get<std::string>();
  r.plan.num_players = j.at("num_players").get<int>();
  r.plan.s = j.at("s").get<double>();
  r.plan.episodes = j.at("episodes").get<int>();
  r.plan.pretrain = j.at("pretrain").get<bool>();
  r.welfare = j.at("welfare").get<std::vector<double>>();
  r.final_window_mean = j.at("final_window_mean").get<double>();
  r.collapsed = j.at("collapsed").get<bool>();
  r.checkpoint = j.at("checkpoint");
  return r;
}

LearnerSet LearnersFromCheckpoint(const json& checkpoint) {
  LearnerSet learners;
  for (const auto& l : checkpoint.at("learners")) {
    learners.push_back(LearnerFromJson(l));
  }
  return learners;
}

Rng RngFromCheckpoint(const json& checkpoint) {
  return DeserializeRng(checkpoint.at("rng").get<std::string>());
}

TrainingRun RunStages(const GameFactory& factory,
                      std::span<const StagePlan> plans,
                      const LearnerConfig& config, std::uint64_t seed,
                      StageStore* store, LearnerSet initial,
                      const RunOptions& options) {
  TrainingRun run;
  run.seed = seed;
  Rng rng(DeriveSeed(seed, options.stream));
  LearnerSet learners = std::move(initial);
  for (int k = 0; k < static_cast<int>(plans.size()); ++k) {
    const StagePlan& plan = plans[k];
    if (store) {
      if (auto saved = store->Load(seed, k)) {
        if (saved->plan.label != plan.label ||
            saved->plan.episodes != plan.episodes) {
          throw std::runtime_error("checkpoint for stage " +
                                   std::to_string(k) +
                                   " does not match the configured plan");
        }
        learners = LearnersFromCheckpoint(saved->checkpoint);
        rng = RngFromCheckpoint(saved->checkpoint);
        run.stages.push_back(std::move(*saved));
        continue;
      }
    }
    const auto game = factory(plan.num_players);
    if (learners.empty()) learners.push_back(MakeLearner(config));
    if (static_cast<int>(learners.size()) > plan.num_players) {
      throw std::invalid_argument("RunStages: player count cannot shrink");
    }
    while (static_cast<int>(learners.size()) < plan.num_players) {
      learners.push_back(learners.front()->Clone());
    }
    StageRecord record = RunOneStage(*game, learners, plan, rng, options);
    if (store) store->Save(seed, k, record);
    run.stages.push_back(std::move(record));
  }
  return run;
}

std::vector<StagePlan> CurriculumPlans(std::span<const int> player_counts,
                                       int episodes_per_stage) {
  std::vector<StagePlan> plans;
  for (std::size_t k = 0; k < player_counts.size(); ++k) {
    if (player_counts[k] < 1 || (k > 0 && player_counts[k] <= player_counts[k - 1])) {
      throw std::invalid_argument(
          "curriculum player counts must be positive and strictly increasing");
    }
    plans.push_back(StagePlan{"pretrain_n" + std::to_string(player_counts[k]),
                              player_counts[k], 1.0, episodes_per_stage, true});
  }
  return plans;
}

std::vector<StagePlan> DescentPlans(int num_players,
                                    std::span<const double> s_stages,
                                    int episodes_per_stage) {
  std::vector<StagePlan> plans;
  for (std::size_t k = 0; k < s_stages.size(); ++k) {
    if (k > 0 && !(s_stages[k] < s_stages[k - 1])) {
      throw std::invalid_argument("self-interest stages must strictly decrease");
    }
    SelfInterest check(s_stages[k], num_players);
    plans.push_back(StagePlan{"stage_" + std::to_string(k), num_players,
                              check.value(), episodes_per_stage, false});
  }
  return plans;
}

TrainingRun PretrainCurriculum(const GameFactory& factory,
                               std::span<const int> player_counts,
                               int episodes_per_stage,
                               const LearnerConfig& config,
                               std::uint64_t seed) {
  const auto plans = CurriculumPlans(player_counts, episodes_per_stage);
  return RunStages(factory, plans, config, seed);
}

std::vector<StageRecord> TrainSelfInterestDescent(
    const MarkovGame& game, LearnerSet& learners,
    std::span<const double> s_stages, int episodes_per_stage, Rng& rng,
    const RunOptions& options) {
  const auto plans =
      DescentPlans(game.num_players(), s_stages, episodes_per_stage);
  std::vector<StageRecord> records;
  for (const auto& plan : plans) {
    records.push_back(RunOneStage(game, learners, plan, rng, options));
  }
  return records;
}

Evaluation Evaluate(const MarkovGame& game,
                    std::span<const Policy* const> policies, int episodes,
                    Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("Evaluate: episodes < 1");
  const int n = game.num_players();
  Evaluation ev;
  ev.episodes = episodes;
  ev.mean_returns.assign(n, 0.0);
  ev.mean_undiscounted_returns.assign(n, 0.0);
  std::vector<double> collective;
  collective.reserve(episodes);
  for (int e = 0; e < episodes; ++e) {
    const EpisodeRewards r = Rollout(game, policies, rng);
    for (int i = 0; i < n; ++i) {
      ev.mean_returns[i] += r.returns[i] / episodes;
      ev.mean_undiscounted_returns[i] += r.undiscounted_returns[i] / episodes;
    }
    collective.push_back(CollectiveReward(r));
  }
  ev.collective_mean =
      std::accumulate(collective.begin(), collective.end(), 0.0) / episodes;
  if (episodes > 1) {
    double ss = 0.0;
    for (double c : collective) ss += (c - ev.collective_mean) * (c - ev.collective_mean);
    ev.collective_sd = std::sqrt(ss / (episodes - 1));
  }
  return ev;
}

Evaluation EvaluateGreedy(const MarkovGame& game, const LearnerSet& learners,
                          int episodes, Rng& rng) {
  std::vector<GreedyPolicy> greedy;
  greedy.reserve(learners.size());
  for (const auto& l : learners) greedy.push_back(GreedyPolicy::View(*l));
  std::vector<const Policy*> view;
  for (const auto& g : greedy) view.push_back(&g);
  return Evaluate(game, view, episodes, rng);
}

}  // namespace dilemma_lab
