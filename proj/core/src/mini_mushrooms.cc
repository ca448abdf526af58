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

#include "dilemma_lab/mini_mushrooms.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dilemma_lab {
namespace {

const MiniMushroomsParams& Checked(const MiniMushroomsParams& p) {
  if (p.num_players < 1) throw std::invalid_argument("mini_mushrooms: players < 1");
  if (p.capacity < 1) throw std::invalid_argument("mini_mushrooms: capacity < 1");
  for (int c = 0; c < kNumMushroomColours; ++c) {
    if (p.initial[c] < 0 || p.initial[c] > p.capacity) {
      throw std::invalid_argument("mini_mushrooms: initial count out of range");
    }
  }
  return p;
}

}  // namespace

MiniMushrooms::MiniMushrooms(MiniMushroomsParams params)
    : MarkovGame("mini_mushrooms",
                 std::vector<std::vector<std::string>>(
                     Checked(params).num_players,
                     {"noop", "eat_red", "eat_green", "eat_blue", "eat_orange"}),
                 params.horizon, 1.0),
      params_(params) {}

State MiniMushrooms::Reset(Rng&) const {
  State state;
  state.values.assign(2 * kNumMushroomColours, 0);
  for (int c = 0; c < kNumMushroomColours; ++c) {
    state.values[c] = params_.initial[c];
  }
  return state;
}

std::uint64_t MiniMushrooms::Observe(const State& state, int) const {
  std::uint64_t key = 0;
  const auto count_base = static_cast<std::uint64_t>(params_.capacity + 1);
  const auto counter_base = static_cast<std::uint64_t>(num_players() + 1);
  for (int c = 0; c < kNumMushroomColours; ++c) {
    key = key * count_base + static_cast<std::uint64_t>(state.values[c]);
  }
  for (int c = 0; c < kNumMushroomColours; ++c) {
    key = key * counter_base +
          static_cast<std::uint64_t>(state.values[kNumMushroomColours + c]);
  }
  return key;
}

StepOutcome MiniMushrooms::Transition(const State& state,
                                      std::span<const int> joint_action,
                                      Rng& rng) const {
  const int n = num_players();
  StepOutcome out;
  out.next_state = state;
  out.rewards.assign(n, 0.0);
  auto& values = out.next_state.values;

  std::array<int, kNumMushroomColours> eaten{};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(rng, order);
  for (int i : order) {
    if (joint_action[i] == kNoop) continue;
    const int colour = joint_action[i] - 1;
    if (values[colour] == 0) continue;
    --values[colour];
    ++eaten[colour];
    switch (static_cast<Mushroom>(colour)) {
      case Mushroom::kRed:
        out.rewards[i] += 1.0;
        break;
      case Mushroom::kGreen:
        for (int j = 0; j < n; ++j) out.rewards[j] += 2.0 / n;
        break;
      case Mushroom::kBlue:
        // With a single player there is nobody to receive the reward.
        for (int j = 0; j < n; ++j) {
          if (j != i) out.rewards[j] += 3.0 / (n - 1);
        }
        break;
      case Mushroom::kOrange:
        values[static_cast<int>(Mushroom::kRed)] = 0;
        break;
    }
  }
  for (int c = 0; c < kNumMushroomColours; ++c) {
    int spawned = Bernoulli(rng, params_.base_rate[c]) ? 1 : 0;
    spawned += Binomial(rng, values[kNumMushroomColours + c],
                        params_.respawn_rate[c]);
    values[c] = std::min(params_.capacity, values[c] + spawned);
    values[kNumMushroomColours + c] = eaten[c];
  }
  return out;
}

}  // namespace dilemma_lab
