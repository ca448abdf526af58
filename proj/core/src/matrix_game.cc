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

#include "dilemma_lab/matrix_game.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dilemma_lab {

MatrixGame::MatrixGame(std::string name,
                       std::vector<std::vector<std::string>> labels,
                       std::vector<double> payoffs)
    : name_(std::move(name)),
      labels_(std::move(labels)),
      payoffs_(std::move(payoffs)) {
  if (labels_.empty()) throw std::invalid_argument("MatrixGame: no players");
  for (const auto& l : labels_) {
    if (l.empty()) throw std::invalid_argument("MatrixGame: empty action set");
    num_joint_ *= static_cast<int>(l.size());
  }
  if (payoffs_.size() !=
      static_cast<std::size_t>(num_joint_) * labels_.size()) {
    throw std::invalid_argument(
        "MatrixGame: payoff tensor size does not match action sets");
  }
}

int MatrixGame::JointIndex(std::span<const int> joint_action) const {
  if (static_cast<int>(joint_action.size()) != num_players()) {
    throw std::domain_error("MatrixGame: joint action arity mismatch");
  }
  int index = 0;
  for (int p = 0; p < num_players(); ++p) {
    if (joint_action[p] < 0 || joint_action[p] >= num_actions(p)) {
      throw std::domain_error("MatrixGame: action out of range");
    }
    index = index * num_actions(p) + joint_action[p];
  }
  return index;
}

std::vector<int> MatrixGame::JointAction(int index) const {
  std::vector<int> joint(num_players());
  for (int p = num_players() - 1; p >= 0; --p) {
    joint[p] = index % num_actions(p);
    index /= num_actions(p);
  }
  return joint;
}

double MatrixGame::Payoff(std::span<const int> joint_action,
                          int player) const {
  return payoffs_[static_cast<std::size_t>(JointIndex(joint_action)) *
                      num_players() +
                  player];
}

std::vector<double> MatrixGame::Payoffs(
    std::span<const int> joint_action) const {
  const auto base =
      static_cast<std::size_t>(JointIndex(joint_action)) * num_players();
  return {payoffs_.begin() + base, payoffs_.begin() + base + num_players()};
}

bool MatrixGame::IsSymmetric() const {
  for (const auto& l : labels_) {
    if (l.size() != labels_.front().size()) return false;
  }
  std::map<std::vector<int>, double> by_profile;
  for (int j = 0; j < num_joint_; ++j) {
    const auto joint = JointAction(j);
    for (int p = 0; p < num_players(); ++p) {
      std::vector<int> key;
      for (int q = 0; q < num_players(); ++q) {
        if (q != p) key.push_back(joint[q]);
      }
      std::sort(key.begin(), key.end());
      key.insert(key.begin(), joint[p]);
      const double value = payoffs_[static_cast<std::size_t>(j) *
                                        num_players() + p];
      auto [it, inserted] = by_profile.emplace(key, value);
      if (!inserted && it->second != value) return false;
    }
  }
  return true;
}

MatrixGame PrisonersDilemma(double temptation, double reward,
                            double punishment, double sucker) {
  return MatrixGame("prisoners_dilemma", {{"C", "D"}, {"C", "D"}},
                    {reward, reward, sucker, temptation, temptation, sucker,
                     punishment, punishment});
}

MatrixGame CommonInterestGame(int num_players, double high, double low) {
  if (num_players < 1) {
    throw std::invalid_argument("CommonInterestGame: need a player");
  }
  std::vector<std::vector<std::string>> labels(num_players, {"C", "D"});
  const int joint = 1 << num_players;
  std::vector<double> payoffs;
  payoffs.reserve(static_cast<std::size_t>(joint) * num_players);
  for (int j = 0; j < joint; ++j) {
    // Joint index 0 is everyone playing C.
    const double v = (j == 0) ? high : low;
    for (int p = 0; p < num_players; ++p) payoffs.push_back(v);
  }
  return MatrixGame("common_interest", std::move(labels), std::move(payoffs));
}

RepeatedMatrixGame::RepeatedMatrixGame(MatrixGame game, int repeats)
    : MarkovGame("matrix", game.labels(), repeats, 1.0),
      game_(std::move(game)) {}

State RepeatedMatrixGame::Reset(Rng&) const { return State{}; }

std::uint64_t RepeatedMatrixGame::Observe(const State& state, int) const {
  return static_cast<std::uint64_t>(state.t);
}

StepOutcome RepeatedMatrixGame::Transition(const State& state,
                                           std::span<const int> joint_action,
                                           Rng&) const {
  StepOutcome out;
  out.next_state = state;
  out.rewards = game_.Payoffs(joint_action);
  return out;
}

std::shared_ptr<const RepeatedMatrixGame> MatrixToMarkov(MatrixGame game,
                                                         int repeats) {
  if (repeats < 1) throw std::invalid_argument("MatrixToMarkov: repeats < 1");
  return std::make_shared<RepeatedMatrixGame>(std::move(game), repeats);
}

}  // namespace dilemma_lab
