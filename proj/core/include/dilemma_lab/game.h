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

#ifndef DILEMMA_LAB_GAME_H_
#define DILEMMA_LAB_GAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dilemma_lab/random.h"

namespace dilemma_lab {

// Concrete state of a game. The layout of `values` is owned by the game that
// produced it; `t` counts completed timesteps.
struct State {
  std::vector<int> values;
  int t = 0;
  bool terminal = false;

  bool operator==(const State&) const = default;
};

struct StepOutcome {
  State next_state;
  std::vector<double> rewards;  // one per player
  bool terminal = false;
};

// Per-player returns of one rollout.
struct EpisodeRewards {
  std::vector<double> returns;               // gamma-discounted
  std::vector<double> undiscounted_returns;
  int episode_length = 0;
};

// An n-player stochastic game with simultaneous moves, per-timestep rewards
// and a finite horizon. Descriptors are immutable once constructed and may be
// shared between threads; all mutable episode data lives in State.
class MarkovGame {
 public:
  MarkovGame(std::string id, std::vector<std::vector<std::string>> action_labels,
             int horizon, double gamma);
  virtual ~MarkovGame() = default;

  MarkovGame(const MarkovGame&) = delete;
  MarkovGame& operator=(const MarkovGame&) = delete;

  const std::string& id() const { return id_; }
  int num_players() const { return static_cast<int>(action_labels_.size()); }
  int num_actions(int player) const {
    return static_cast<int>(action_labels_.at(player).size());
  }
  const std::vector<std::string>& action_labels(int player) const {
    return action_labels_.at(player);
  }
  int horizon() const { return horizon_; }
  double gamma() const { return gamma_; }

  // True when every player has the same action set and payoffs are invariant
  // under relabelling of players.
  virtual bool symmetric() const;

  virtual State Reset(Rng& rng) const = 0;

  // Samples the next state. Throws std::domain_error for an invalid action
  // and std::logic_error when `state` is terminal.
  StepOutcome Step(const State& state, std::span<const int> joint_action,
                   Rng& rng) const;

  // Observation key of `player` in `state`. Shipped games are fully
  // observable, so this is an exact encoding of the state.
  virtual std::uint64_t Observe(const State& state, int player) const = 0;

  virtual std::string StateString(const State& state) const;

 protected:
  // Game-specific dynamics. Implementations fill next_state.values, rewards
  // and may set terminal for absorbing states; Step handles the clock.
  virtual StepOutcome Transition(const State& state,
                                 std::span<const int> joint_action,
                                 Rng& rng) const = 0;

 private:
  std::string id_;
  std::vector<std::vector<std::string>> action_labels_;
  int horizon_;
  double gamma_;
};

class Policy;

// Plays one full episode from Reset. `policies` holds one policy per player.
// When `final_state` is non-null it receives the terminal state.
EpisodeRewards Rollout(const MarkovGame& game,
                       std::span<const Policy* const> policies, Rng& rng,
                       State* final_state = nullptr);

// Unweighted sum of rewards over players.
double UtilitarianWelfare(std::span<const double> rewards);

// Welfare of the undiscounted episode returns.
double CollectiveReward(const EpisodeRewards& rewards);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_GAME_H_
