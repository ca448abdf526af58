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

#ifndef DILEMMA_LAB_MINI_COMMONS_H_
#define DILEMMA_LAB_MINI_COMMONS_H_

#include "dilemma_lab/game.h"

namespace dilemma_lab {

// Patch-stock common-pool resource. Each player either abstains or harvests
// one apple from a patch. After harvesting, a live patch regrows one apple
// with probability regrowth_rate * stock / capacity. A patch whose stock hits
// zero is depleted for the rest of the episode.
struct MiniCommonsParams {
  int num_players = 4;
  int patches = 2;
  int capacity = 6;
  double regrowth_rate = 0.1;
  int horizon = 200;
};

class MiniCommons final : public MarkovGame {
 public:
  explicit MiniCommons(MiniCommonsParams params);

  const MiniCommonsParams& params() const { return params_; }

  static constexpr int kAbstain = 0;
  // Action that harvests from `patch`.
  static int HarvestAction(int patch) { return patch + 1; }

  int Stock(const State& state, int patch) const {
    return state.values[patch];
  }
  bool Depleted(const State& state, int patch) const {
    return state.values[params_.patches + patch] != 0;
  }
  int DepletedCount(const State& state) const;
  int TotalStock(const State& state) const;
  double RegrowthProbability(int stock) const;

  State Reset(Rng& rng) const override;
  std::uint64_t Observe(const State& state, int player) const override;

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint_action,
                         Rng& rng) const override;

 private:
  MiniCommonsParams params_;
};

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_MINI_COMMONS_H_
