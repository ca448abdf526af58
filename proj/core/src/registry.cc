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

#include "dilemma_lab/registry.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dilemma_lab/mini_cleanup.h"
#include "dilemma_lab/mini_commons.h"
#include "dilemma_lab/mini_mushrooms.h"
#include "dilemma_lab/pgg.h"

namespace dilemma_lab {
namespace {

using nlohmann::json;

void RejectUnknown(const std::string& id, const json& params,
                   std::initializer_list<const char*> allowed) {
  if (params.is_null()) return;  // no parameters given
  if (!params.is_object()) {
    throw std::invalid_argument(id + ": params must be an object");
  }
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : params.items()) {
    if (!keys.contains(key)) {
      throw std::invalid_argument(id + ": unknown parameter '" + key + "'");
    }
  }
}

template <typename T>
void Read(const json& params, const char* key, T& out) {
  if (params.contains(key)) out = params.at(key).get<T>();
}

MiniCommonsParams CommonsParams(const EnvironmentSpec& spec, int n) {
  RejectUnknown(spec.id, spec.params,
                {"patches", "capacity", "regrowth_rate", "horizon"});
  MiniCommonsParams p;
  p.num_players = n;
  Read(spec.params, "patches", p.patches);
  Read(spec.params, "capacity", p.capacity);
  Read(spec.params, "regrowth_rate", p.regrowth_rate);
  Read(spec.params, "horizon", p.horizon);
  return p;
}

MiniCleanupParams CleanupParams(const EnvironmentSpec& spec, int n) {
  RejectUnknown(spec.id, spec.params,
                {"max_players", "levels", "initial_level", "pollution_rate",
                 "apple_rate", "growth_threshold", "apple_capacity",
                 "horizon"});
  MiniCleanupParams p;
  p.num_players = n;
  p.max_players = std::max(ResolvedPlayerCount(spec), n);
  Read(spec.params, "max_players", p.max_players);
  Read(spec.params, "levels", p.levels);
  Read(spec.params, "initial_level", p.initial_level);
  Read(spec.params, "pollution_rate", p.pollution_rate);
  Read(spec.params, "apple_rate", p.apple_rate);
  Read(spec.params, "growth_threshold", p.growth_threshold);
  Read(spec.params, "apple_capacity", p.apple_capacity);
  Read(spec.params, "horizon", p.horizon);
  return p;
}

MiniMushroomsParams MushroomParams(const EnvironmentSpec& spec, int n) {
  RejectUnknown(spec.id, spec.params,
                {"capacity", "base_rate", "respawn_rate", "initial", "horizon"});
  MiniMushroomsParams p;
  p.num_players = n;
  Read(spec.params, "capacity", p.capacity);
  Read(spec.params, "base_rate", p.base_rate);
  Read(spec.params, "respawn_rate", p.respawn_rate);
  Read(spec.params, "initial", p.initial);
  Read(spec.params, "horizon", p.horizon);
  return p;
}

PGGParams PublicGoodsParams(const EnvironmentSpec& spec, int n) {
  RejectUnknown(spec.id, spec.params, {"k1", "k2", "cx", "grid"});
  PGGParams p;
  p.n = n;
  Read(spec.params, "k1", p.k1);
  Read(spec.params, "k2", p.k2);
  Read(spec.params, "cx", p.cx);
  Read(spec.params, "grid", p.grid);
  return p;
}

void CheckMatrixParams(const EnvironmentSpec& spec) {
  RejectUnknown(spec.id, spec.params,
                {"game", "payoffs", "labels", "players", "high", "low",
                 "repeats", "cooperate_action", "defect_action"});
}

int DefaultPlayers(const std::string& id) {
  if (id == "mini_commons") return 4;
  if (id == "mini_cleanup") return 4;
  if (id == "mini_mushrooms") return 5;
  if (id == "pgg") return 4;
  if (id == "matrix") return 2;
  throw std::invalid_argument("unknown environment id '" + id + "'");
}

}  // namespace

MatrixGame MatrixGameFromJson(const json& params) {
  const std::string game = params.value("game", std::string("custom"));
  if (game == "pd") {
    std::vector<double> tpr = params.value(
        "payoffs", std::vector<double>{5.0, 3.0, 1.0, 0.0});
    if (tpr.size() != 4) {
      throw std::invalid_argument("matrix: pd payoffs must be [T, R, P, S]");
    }
    return PrisonersDilemma(tpr[0], tpr[1], tpr[2], tpr[3]);
  }
  if (game == "common_interest") {
    return CommonInterestGame(params.value("players", 2),
                              params.value("high", 1.0),
                              params.value("low", 0.0));
  }
  if (game != "custom") {
    throw std::invalid_argument("matrix: unknown game '" + game + "'");
  }
  if (!params.contains("labels") || !params.contains("payoffs")) {
    throw std::invalid_argument(
        "matrix: custom games need 'labels' and 'payoffs'");
  }
  return MatrixGame("custom",
                    params.at("labels").get<std::vector<std::vector<std::string>>>(),
                    params.at("payoffs").get<std::vector<double>>());
}

int ResolvedPlayerCount(const EnvironmentSpec& spec) {
  if (spec.id == "matrix") {
    const int arity = MatrixGameFromJson(spec.params).num_players();
    if (spec.num_players != 0 && spec.num_players != arity) {
      throw std::invalid_argument(
          "matrix: players does not match the payoff tensor");
    }
    return arity;
  }
  return spec.num_players > 0 ? spec.num_players : DefaultPlayers(spec.id);
}

GameFactory MakeGameFamily(const EnvironmentSpec& spec) {
  DefaultPlayers(spec.id);  // validates the id
  if (spec.id == "matrix") {
    CheckMatrixParams(spec);
    const MatrixGame matrix = MatrixGameFromJson(spec.params);
    const int repeats = spec.params.value("repeats", 1);
    return [matrix, repeats](int n) -> std::shared_ptr<const MarkovGame> {
      if (n != matrix.num_players()) {
        throw std::invalid_argument("matrix: game has a fixed player count");
      }
      return MatrixToMarkov(matrix, repeats);
    };
  }
  return [spec](int n) -> std::shared_ptr<const MarkovGame> {
    if (spec.id == "mini_commons") {
      return std::make_shared<MiniCommons>(CommonsParams(spec, n));
    }
    if (spec.id == "mini_cleanup") {
      return std::make_shared<MiniCleanup>(CleanupParams(spec, n));
    }
    if (spec.id == "mini_mushrooms") {
      return std::make_shared<MiniMushrooms>(MushroomParams(spec, n));
    }
    return std::make_shared<PublicGoodsGame>(PublicGoodsParams(spec, n));
  };
}

std::shared_ptr<const MarkovGame> MakeGame(const EnvironmentSpec& spec) {
  return MakeGameFamily(spec)(ResolvedPlayerCount(spec));
}

std::unique_ptr<Policy> BuiltinPolicy(const EnvironmentSpec& spec,
                                      StrategyKind kind) {
  const bool cooperate = kind == StrategyKind::kCooperate;
  if (spec.id == "matrix") {
    CheckMatrixParams(spec);
    const int action = cooperate ? spec.params.value("cooperate_action", 0)
                                 : spec.params.value("defect_action", 1);
    return std::make_unique<ConstantActionPolicy>(action);
  }
  if (spec.id == "pgg") {
    const auto game = MakeGame(spec);
    const auto& pgg = static_cast<const PublicGoodsGame&>(*game);
    return std::make_unique<ConstantActionPolicy>(
        cooperate ? pgg.ActionFor(pgg.params().cx) : 0);
  }
  if (spec.id == "mini_commons") {
    // Cooperators only take from a patch holding more than half its
    // capacity; defectors take from the fullest live patch.
    return std::make_unique<ScriptedPolicy>(
        cooperate ? "commons_restrained" : "commons_greedy",
        [cooperate](const MarkovGame& g, const State& s, int) {
          const auto& commons = static_cast<const MiniCommons&>(g);
          int best = -1;
          for (int p = 0; p < commons.params().patches; ++p) {
            if (best < 0 || commons.Stock(s, p) > commons.Stock(s, best)) {
              best = p;
            }
          }
          const int stock = commons.Stock(s, best);
          const int floor = cooperate ? commons.params().capacity / 2 : 0;
          return stock > floor ? MiniCommons::HarvestAction(best)
                               : MiniCommons::kAbstain;
        });
  }
  if (spec.id == "mini_cleanup") {
    // Cooperators clean whenever pollution reaches half the growth
    // threshold; defectors never clean.
    return std::make_unique<ScriptedPolicy>(
        cooperate ? "cleanup_cleaner" : "cleanup_free_rider",
        [cooperate](const MarkovGame& g, const State& s, int) {
          const auto& cleanup = static_cast<const MiniCleanup&>(g);
          if (cooperate &&
              cleanup.Pollution(s) >= 0.5 * cleanup.params().growth_threshold) {
            return MiniCleanup::kClean;
          }
          return cleanup.Apples(s) > 0 ? MiniCleanup::kHarvest
                                       : MiniCleanup::kNoop;
        });
  }
  if (spec.id == "mini_mushrooms") {
    return std::make_unique<ConstantActionPolicy>(MiniMushrooms::EatAction(
        cooperate ? Mushroom::kGreen : Mushroom::kRed));
  }
  throw std::invalid_argument("unknown environment id '" + spec.id + "'");
}

}  // namespace dilemma_lab
