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

#ifndef DILEMMA_LAB_MINI_MUSHROOMS_H_
#define DILEMMA_LAB_MINI_MUSHROOMS_H_

#include <array>

#include "dilemma_lab/game.h"

namespace dilemma_lab {

enum class Mushroom : int { kRed = 0, kGreen = 1, kBlue = 2, kOrange = 3 };
inline constexpr int kNumMushroomColours = 4;

// Four mushroom colours with colour-specific reward splits:
//   red    -> 1 to the eater
//   green  -> 2 split equally among all players
//   blue   -> 3 split equally among everyone except the eater
//   orange -> nothing, destroys every red mushroom on the map
// Each colour spawns one mushroom per step with probability base_rate, and
// every mushroom eaten in the previous step respawns with probability
// respawn_rate. The per-colour respawn counter is part of the state.
struct MiniMushroomsParams {
  int num_players = 5;
  int capacity = 6;
  std::array<double, kNumMushroomColours> base_rate{0.5, 0.9, 0.3, 0.2};
  std::array<double, kNumMushroomColours> respawn_rate{0.3, 0.75, 0.5, 0.3};
  std::array<int, kNumMushroomColours> initial{2, 2, 2, 2};
  int horizon = 200;
};

class MiniMushrooms final : public MarkovGame {
 public:
  explicit MiniMushrooms(MiniMushroomsParams params);

  static constexpr int kNoop = 0;
  static int EatAction(Mushroom colour) { return static_cast<int>(colour) + 1; }

  const MiniMushroomsParams& params() const { return params_; }

  int Count(const State& state, Mushroom colour) const {
    return state.values[static_cast<int>(colour)];
  }
  int RespawnCounter(const State& state, Mushroom colour) const {
    return state.values[kNumMushroomColours + static_cast<int>(colour)];
  }

  State Reset(Rng& rng) const override;
  std::uint64_t Observe(const State& state, int player) const override;

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint_action,
                         Rng& rng) const override;

 private:
  MiniMushroomsParams params_;
};

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_MINI_MUSHROOMS_H_
