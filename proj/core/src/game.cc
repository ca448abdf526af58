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

#include "dilemma_lab/game.h"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dilemma_lab/policy.h"

namespace dilemma_lab {

MarkovGame::MarkovGame(std::string id,
                       std::vector<std::vector<std::string>> action_labels,
                       int horizon, double gamma)
    : id_(std::move(id)),
      action_labels_(std::move(action_labels)),
      horizon_(horizon),
      gamma_(gamma) {
  if (action_labels_.empty()) {
    throw std::invalid_argument("MarkovGame: need at least one player");
  }
  for (const auto& labels : action_labels_) {
    if (labels.empty()) {
      throw std::invalid_argument("MarkovGame: empty action set");
    }
  }
  if (horizon_ < 1) throw std::invalid_argument("MarkovGame: horizon < 1");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) {
    throw std::invalid_argument("MarkovGame: gamma must lie in (0, 1]");
  }
}

bool MarkovGame::symmetric() const {
  for (const auto& labels : action_labels_) {
    if (labels != action_labels_.front()) return false;
  }
  return true;
}

StepOutcome MarkovGame::Step(const State& state,
                             std::span<const int> joint_action,
                             Rng& rng) const {
  if (state.terminal) {
    throw std::logic_error("Step called on a terminal state");
  }
  if (static_cast<int>(joint_action.size()) != num_players()) {
    throw std::domain_error("joint action has wrong number of entries");
  }
  for (int i = 0; i < num_players(); ++i) {
    if (joint_action[i] < 0 || joint_action[i] >= num_actions(i)) {
      throw std::domain_error("invalid action " +
                              std::to_string(joint_action[i]) +
                              " for player " + std::to_string(i));
    }
  }
  StepOutcome out = Transition(state, joint_action, rng);
  out.next_state.t = state.t + 1;
  if (out.next_state.t >= horizon_) out.terminal = true;
  out.next_state.terminal = out.terminal;
  return out;
}

std::string MarkovGame::StateString(const State& state) const {
  std::ostringstream out;
  out << "t=" << state.t << " [";
  for (std::size_t i = 0; i < state.values.size(); ++i) {
    if (i) out << ' ';
    out << state.values[i];
  }
  out << ']';
  return out.str();
}

EpisodeRewards Rollout(const MarkovGame& game,
                       std::span<const Policy* const> policies, Rng& rng,
                       State* final_state) {
  const int n = game.num_players();
  if (static_cast<int>(policies.size()) != n) {
    throw std::invalid_argument("Rollout: need one policy per player");
  }
  EpisodeRewards result;
  result.returns.assign(n, 0.0);
  result.undiscounted_returns.assign(n, 0.0);
  State state = game.Reset(rng);
  std::vector<int> joint(n);
  double discount = 1.0;
  while (!state.terminal) {
    for (int i = 0; i < n; ++i) joint[i] = policies[i]->Act(game, state, i, rng);
    StepOutcome out = game.Step(state, joint, rng);
    for (int i = 0; i < n; ++i) {
      result.returns[i] += discount * out.rewards[i];
      result.undiscounted_returns[i] += out.rewards[i];
    }
    discount *= game.gamma();
    ++result.episode_length;
    state = std::move(out.next_state);
  }
  if (final_state) *final_state = state;
  return result;
}

double UtilitarianWelfare(std::span<const double> rewards) {
  return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

double CollectiveReward(const EpisodeRewards& rewards) {
  return UtilitarianWelfare(rewards.undiscounted_returns);
}

}  // namespace dilemma_lab
