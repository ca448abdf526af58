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

#ifndef DILEMMA_LAB_REGISTRY_H_
#define DILEMMA_LAB_REGISTRY_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/game.h"
#include "dilemma_lab/matrix_game.h"
#include "dilemma_lab/policy.h"

namespace dilemma_lab {

// Environment ids accepted by MakeGame.
inline constexpr const char* kEnvironmentIds[] = {
    "mini_commons", "mini_cleanup", "mini_mushrooms", "matrix", "pgg"};

// Environment id, player count and id-specific parameters. Unknown parameter
// keys are rejected with std::invalid_argument naming the key.
struct EnvironmentSpec {
  std::string id;
  int num_players = 0;  // 0: use the environment's default
  nlohmann::json params = nlohmann::json::object();
};

using GameFactory =
    std::function<std::shared_ptr<const MarkovGame>(int num_players)>;

std::shared_ptr<const MarkovGame> MakeGame(const EnvironmentSpec& spec);

// Same environment instantiated at an arbitrary player count. Matrix games
// have a fixed arity and reject any other count.
GameFactory MakeGameFamily(const EnvironmentSpec& spec);

// Player count MakeGame(spec) would produce.
int ResolvedPlayerCount(const EnvironmentSpec& spec);

// Matrix game described by "game": "pd" with "payoffs": [T, R, P, S], by
// "game": "common_interest", or by explicit "labels" and flattened
// "payoffs".
MatrixGame MatrixGameFromJson(const nlohmann::json& params);

enum class StrategyKind { kCooperate, kDefect };

// Hand-written cooperate/defect strategy for environment `spec`.
std::unique_ptr<Policy> BuiltinPolicy(const EnvironmentSpec& spec,
                                      StrategyKind kind);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_REGISTRY_H_
