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

#include "dilemma_lab/mini_commons.h"

#include <numeric>
#include <stdexcept>
#include <string>

namespace dilemma_lab {
namespace {

std::vector<std::vector<std::string>> CommonsLabels(
    const MiniCommonsParams& p) {
  std::vector<std::string> labels{"abstain"};
  for (int k = 0; k < p.patches; ++k) {
    labels.push_back("harvest_" + std::to_string(k));
  }
  return std::vector<std::vector<std::string>>(p.num_players, labels);
}

const MiniCommonsParams& Checked(const MiniCommonsParams& p) {
  if (p.num_players < 1) throw std::invalid_argument("mini_commons: players < 1");
  if (p.patches < 1) throw std::invalid_argument("mini_commons: patches < 1");
  if (p.capacity < 1) throw std::invalid_argument("mini_commons: capacity < 1");
  if (!(p.regrowth_rate >= 0.0 && p.regrowth_rate <= 1.0)) {
    throw std::invalid_argument("mini_commons: regrowth_rate outside [0, 1]");
  }
  return p;
}

}  // namespace

MiniCommons::MiniCommons(MiniCommonsParams params)
    : MarkovGame("mini_commons", CommonsLabels(Checked(params)),
                 params.horizon, 1.0),
      params_(params) {}

int MiniCommons::DepletedCount(const State& state) const {
  int count = 0;
  for (int p = 0; p < params_.patches; ++p) count += Depleted(state, p) ? 1 : 0;
  return count;
}

int MiniCommons::TotalStock(const State& state) const {
  return std::accumulate(state.values.begin(),
                         state.values.begin() + params_.patches, 0);
}

double MiniCommons::RegrowthProbability(int stock) const {
  if (stock <= 0 || stock >= params_.capacity) return 0.0;
  return params_.regrowth_rate * static_cast<double>(stock) /
         params_.capacity;
}

State MiniCommons::Reset(Rng&) const {
  State state;
  state.values.assign(2 * params_.patches, 0);
  for (int p = 0; p < params_.patches; ++p) state.values[p] = params_.capacity;
  return state;
}

std::uint64_t MiniCommons::Observe(const State& state, int) const {
  std::uint64_t key = 0;
  for (int p = 0; p < params_.patches; ++p) {
    key = key * static_cast<std::uint64_t>(params_.capacity + 1) +
          static_cast<std::uint64_t>(state.values[p]);
  }
  return key;
}

StepOutcome MiniCommons::Transition(const State& state,
                                    std::span<const int> joint_action,
                                    Rng& rng) const {
  const int n = num_players();
  StepOutcome out;
  out.next_state = state;
  out.rewards.assign(n, 0.0);
  auto& values = out.next_state.values;

  // Contested patches are resolved in a random player order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(rng, order);
  for (int i : order) {
    const int action = joint_action[i];
    if (action == kAbstain) continue;
    const int patch = action - 1;
    if (values[patch] > 0) {
      --values[patch];
      out.rewards[i] += 1.0;
      if (values[patch] == 0) values[params_.patches + patch] = 1;
    }
  }
  for (int p = 0; p < params_.patches; ++p) {
    if (Bernoulli(rng, RegrowthProbability(values[p]))) ++values[p];
  }
  return out;
}

}  // namespace dilemma_lab
