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

#ifndef DILEMMA_LAB_MATRIX_GAME_H_
#define DILEMMA_LAB_MATRIX_GAME_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dilemma_lab/game.h"

namespace dilemma_lab {

// Normal-form game. Payoffs are stored joint-action-major: the entry for
// player p at joint action a lives at JointIndex(a) * n + p, with joint
// indices enumerated row-major (player 0 most significant).
class MatrixGame {
 public:
  MatrixGame(std::string name, std::vector<std::vector<std::string>> labels,
             std::vector<double> payoffs);

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(labels_.size()); }
  int num_actions(int player) const {
    return static_cast<int>(labels_.at(player).size());
  }
  int num_joint_actions() const { return num_joint_; }
  const std::vector<std::vector<std::string>>& labels() const {
    return labels_;
  }
  const std::vector<double>& payoffs() const { return payoffs_; }

  int JointIndex(std::span<const int> joint_action) const;
  std::vector<int> JointAction(int index) const;
  double Payoff(std::span<const int> joint_action, int player) const;
  std::vector<double> Payoffs(std::span<const int> joint_action) const;

  // Each player's payoff depends only on its own action and the multiset of
  // co-player actions, and all action sets coincide.
  bool IsSymmetric() const;

 private:
  std::string name_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<double> payoffs_;
  int num_joint_ = 1;
};

// Two-player prisoner's dilemma with actions {C, D}:
// (C,C)=(R,R), (C,D)=(S,T), (D,C)=(T,S), (D,D)=(P,P).
MatrixGame PrisonersDilemma(double temptation, double reward,
                            double punishment, double sucker);

// Symmetric two-action game with identical payoffs to every player; action 0
// ("C") gives `high` when everyone plays it and `low` otherwise.
MatrixGame CommonInterestGame(int num_players, double high, double low);

// Single-state Markov game that plays `game` `repeats` times with gamma = 1.
// The observation is the round index.
class RepeatedMatrixGame final : public MarkovGame {
 public:
  RepeatedMatrixGame(MatrixGame game, int repeats);

  const MatrixGame& matrix() const { return game_; }
  int repeats() const { return horizon(); }

  bool symmetric() const override { return game_.IsSymmetric(); }
  State Reset(Rng& rng) const override;
  std::uint64_t Observe(const State& state, int player) const override;

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint_action,
                         Rng& rng) const override;

 private:
  MatrixGame game_;
};

std::shared_ptr<const RepeatedMatrixGame> MatrixToMarkov(MatrixGame game,
                                                         int repeats);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_MATRIX_GAME_H_
