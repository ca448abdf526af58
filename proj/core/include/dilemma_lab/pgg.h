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

#ifndef DILEMMA_LAB_PGG_H_
#define DILEMMA_LAB_PGG_H_

#include <memory>
#include <span>
#include <vector>

#include "dilemma_lab/game.h"

namespace dilemma_lab {

// Threshold public goods game: every player holds 1 unit and contributes
// c in [0, 1]. Contributions up to `cx` are multiplied by k1, the remainder
// by k2, and the fund is split equally among all n players.
struct PGGParams {
  int n = 4;
  double k1 = 3.0;
  double k2 = 2.0;
  double cx = 0.5;
  int grid = 11;  // number of contribution levels, including 0 and 1
};

// Throws std::invalid_argument unless 1 < k2 < k1 < n, 0 < cx <= 1 and
// grid >= 2.
void ValidatePgg(const PGGParams& params);

// Multiplied value of a single contribution.
double PggFundShare(double contribution, const PGGParams& params);

// 1 - c_i + (1/n) sum_j (k1 min(cx, c_j) + k2 max(0, c_j - cx)).
// Throws std::domain_error for a contribution outside [0, 1].
std::vector<double> PggPayoffs(std::span<const double> contributions,
                               const PGGParams& params);

// One-shot game over the contribution grid. Action a contributes
// a / (grid - 1).
class PublicGoodsGame final : public MarkovGame {
 public:
  explicit PublicGoodsGame(PGGParams params);

  const PGGParams& params() const { return params_; }
  double Contribution(int action) const;
  // Grid action closest to contribution c.
  int ActionFor(double contribution) const;

  State Reset(Rng& rng) const override;
  std::uint64_t Observe(const State& state, int player) const override;

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint_action,
                         Rng& rng) const override;

 private:
  PGGParams params_;
};

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_PGG_H_
