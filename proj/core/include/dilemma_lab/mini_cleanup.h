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

#ifndef DILEMMA_LAB_MINI_CLEANUP_H_
#define DILEMMA_LAB_MINI_CLEANUP_H_

#include "dilemma_lab/game.h"

namespace dilemma_lab {

// Public-goods analog with a one-dimensional pollution state. Cleaning lowers
// pollution by one level per cleaner; pollution rises one level with
// probability pollution_rate per step; apples spawn with a probability that
// falls linearly from apple_rate at zero pollution to nothing at
// `growth_threshold`. Both rates are scaled by num_players / max_players.
struct MiniCleanupParams {
  int num_players = 4;
  int max_players = 4;
  int levels = 21;  // pollution levels 0 .. levels-1 map onto [0, 1]
  int initial_level = 0;
  double pollution_rate = 0.5;
  double apple_rate = 0.9;
  double growth_threshold = 0.4;
  int apple_capacity = 4;
  int horizon = 200;
};

class MiniCleanup final : public MarkovGame {
 public:
  explicit MiniCleanup(MiniCleanupParams params);

  static constexpr int kNoop = 0;
  static constexpr int kClean = 1;
  static constexpr int kHarvest = 2;

  const MiniCleanupParams& params() const { return params_; }

  int Level(const State& state) const { return state.values[0]; }
  int Apples(const State& state) const { return state.values[1]; }
  double Pollution(const State& state) const;
  double PollutionAt(int level) const;
  double RateScale() const;
  // Probability that one apple spawns this step at the given level.
  double AppleGrowthProbability(int level) const;

  State Reset(Rng& rng) const override;
  std::uint64_t Observe(const State& state, int player) const override;

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint_action,
                         Rng& rng) const override;

 private:
  MiniCleanupParams params_;
};

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_MINI_CLEANUP_H_
