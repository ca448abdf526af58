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

#ifndef DILEMMA_LAB_POLICY_H_
#define DILEMMA_LAB_POLICY_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dilemma_lab/game.h"

namespace dilemma_lab {

// pi_i(a | o). A policy samples an action for one player slot.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int Act(const MarkovGame& game, const State& state, int player,
                  Rng& rng) const = 0;
  virtual std::unique_ptr<Policy> ClonePolicy() const = 0;
  virtual std::string Describe() const { return "policy"; }
};

class ConstantActionPolicy final : public Policy {
 public:
  explicit ConstantActionPolicy(int action) : action_(action) {}
  int Act(const MarkovGame&, const State&, int, Rng&) const override {
    return action_;
  }
  std::unique_ptr<Policy> ClonePolicy() const override {
    return std::make_unique<ConstantActionPolicy>(action_);
  }
  std::string Describe() const override;
  int action() const { return action_; }

 private:
  int action_;
};

// Deterministic state-feedback rule, used for the built-in scripted
// cooperate/defect strategies.
class ScriptedPolicy final : public Policy {
 public:
  using Rule = std::function<int(const MarkovGame&, const State&, int)>;
  ScriptedPolicy(std::string name, Rule rule)
      : name_(std::move(name)), rule_(std::move(rule)) {}
  int Act(const MarkovGame& game, const State& state, int player,
          Rng&) const override {
    return rule_(game, state, player);
  }
  std::unique_ptr<Policy> ClonePolicy() const override {
    return std::make_unique<ScriptedPolicy>(name_, rule_);
  }
  std::string Describe() const override { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

// Raw-pointer view over a vector of owned policies, in slot order.
std::vector<const Policy*> PolicyView(
    const std::vector<std::unique_ptr<Policy>>& policies);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_POLICY_H_
