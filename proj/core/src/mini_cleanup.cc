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

#include "dilemma_lab/mini_cleanup.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dilemma_lab {
namespace {

const MiniCleanupParams& Checked(const MiniCleanupParams& p) {
  if (p.num_players < 1 || p.max_players < p.num_players) {
    throw std::invalid_argument(
        "mini_cleanup: need 1 <= num_players <= max_players");
  }
  if (p.levels < 2) throw std::invalid_argument("mini_cleanup: levels < 2");
  if (p.initial_level < 0 || p.initial_level >= p.levels) {
    throw std::invalid_argument("mini_cleanup: initial_level out of range");
  }
  if (!(p.growth_threshold > 0.0 && p.growth_threshold <= 1.0)) {
    throw std::invalid_argument("mini_cleanup: growth_threshold outside (0, 1]");
  }
  if (p.apple_capacity < 1) {
    throw std::invalid_argument("mini_cleanup: apple_capacity < 1");
  }
  return p;
}

}  // namespace

MiniCleanup::MiniCleanup(MiniCleanupParams params)
    : MarkovGame("mini_cleanup",
                 std::vector<std::vector<std::string>>(
                     Checked(params).num_players, {"noop", "clean", "harvest"}),
                 params.horizon, 1.0),
      params_(params) {}

double MiniCleanup::PollutionAt(int level) const {
  return static_cast<double>(level) / (params_.levels - 1);
}

double MiniCleanup::Pollution(const State& state) const {
  return PollutionAt(Level(state));
}

double MiniCleanup::RateScale() const {
  return static_cast<double>(params_.num_players) / params_.max_players;
}

double MiniCleanup::AppleGrowthProbability(int level) const {
  const double pollution = PollutionAt(level);
  if (pollution >= params_.growth_threshold) return 0.0;
  const double p = params_.apple_rate * RateScale() *
                   (1.0 - pollution / params_.growth_threshold);
  return std::clamp(p, 0.0, 1.0);
}

State MiniCleanup::Reset(Rng&) const {
  State state;
  state.values = {params_.initial_level, 0};
  return state;
}

std::uint64_t MiniCleanup::Observe(const State& state, int) const {
  return static_cast<std::uint64_t>(Level(state)) *
             static_cast<std::uint64_t>(params_.apple_capacity + 1) +
         static_cast<std::uint64_t>(Apples(state));
}

StepOutcome MiniCleanup::Transition(const State& state,
                                    std::span<const int> joint_action,
                                    Rng& rng) const {
  const int n = num_players();
  StepOutcome out;
  out.next_state = state;
  out.rewards.assign(n, 0.0);
  int& level = out.next_state.values[0];
  int& apples = out.next_state.values[1];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(rng, order);
  int cleaners = 0;
  for (int i : order) {
    if (joint_action[i] == kHarvest && apples > 0) {
      --apples;
      out.rewards[i] += 1.0;
    } else if (joint_action[i] == kClean) {
      ++cleaners;
    }
  }
  level = std::max(0, level - cleaners);
  if (Bernoulli(rng, std::clamp(params_.pollution_rate * RateScale(), 0.0,
                                1.0))) {
    level = std::min(params_.levels - 1, level + 1);
  }
  if (apples < params_.apple_capacity &&
      Bernoulli(rng, AppleGrowthProbability(level))) {
    ++apples;
  }
  return out;
}

}  // namespace dilemma_lab
