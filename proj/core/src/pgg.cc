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

#include "dilemma_lab/pgg.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dilemma_lab {
namespace {

std::vector<std::vector<std::string>> ContributionLabels(
    const PGGParams& params) {
  std::vector<std::string> labels;
  for (int a = 0; a < params.grid; ++a) {
    labels.push_back("c=" + std::to_string(static_cast<double>(a) /
                                           (params.grid - 1)));
  }
  return std::vector<std::vector<std::string>>(params.n, labels);
}

}  // namespace

void ValidatePgg(const PGGParams& params) {
  if (params.n < 2) throw std::invalid_argument("pgg: n must be at least 2");
  if (!(1.0 < params.k2 && params.k2 < params.k1 && params.k1 < params.n)) {
    throw std::invalid_argument("pgg: multipliers must satisfy 1 < k2 < k1 < n");
  }
  if (!(params.cx > 0.0 && params.cx <= 1.0)) {
    throw std::invalid_argument("pgg: cx must lie in (0, 1]");
  }
  if (params.grid < 2) throw std::invalid_argument("pgg: grid must be >= 2");
}

double PggFundShare(double contribution, const PGGParams& params) {
  return params.k1 * std::min(params.cx, contribution) +
         params.k2 * std::max(0.0, contribution - params.cx);
}

std::vector<double> PggPayoffs(std::span<const double> contributions,
                               const PGGParams& params) {
  if (static_cast<int>(contributions.size()) != params.n) {
    throw std::invalid_argument("pgg: need one contribution per player");
  }
  double fund = 0.0;
  for (double c : contributions) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::domain_error("pgg: contribution outside [0, 1]");
    }
    fund += PggFundShare(c, params);
  }
  std::vector<double> payoffs;
  payoffs.reserve(contributions.size());
  for (double c : contributions) payoffs.push_back(1.0 - c + fund / params.n);
  return payoffs;
}

PublicGoodsGame::PublicGoodsGame(PGGParams params)
    : MarkovGame("pgg", ContributionLabels(params), 1, 1.0),
      params_(params) {
  ValidatePgg(params_);
}

double PublicGoodsGame::Contribution(int action) const {
  return static_cast<double>(action) / (params_.grid - 1);
}

int PublicGoodsGame::ActionFor(double contribution) const {
  return static_cast<int>(std::lround(contribution * (params_.grid - 1)));
}

State PublicGoodsGame::Reset(Rng&) const { return State{}; }

std::uint64_t PublicGoodsGame::Observe(const State& state, int) const {
  return static_cast<std::uint64_t>(state.t);
}

StepOutcome PublicGoodsGame::Transition(const State& state,
                                        std::span<const int> joint_action,
                                        Rng&) const {
  std::vector<double> contributions;
  contributions.reserve(joint_action.size());
  for (int a : joint_action) contributions.push_back(Contribution(a));
  StepOutcome out;
  out.next_state = state;
  out.rewards = PggPayoffs(contributions, params_);
  return out;
}

}  // namespace dilemma_lab
