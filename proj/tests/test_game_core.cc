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

#include <algorithm>
#include <array>
#include <numeric>

#include <gtest/gtest.h>

#include "dilemma_lab/game.h"
#include "dilemma_lab/matrix_game.h"
#include "dilemma_lab/mini_cleanup.h"
#include "dilemma_lab/mini_commons.h"
#include "dilemma_lab/mini_mushrooms.h"
#include "dilemma_lab/pgg.h"
#include "dilemma_lab/policy.h"
#include "dilemma_lab/registry.h"
#include "test_games.h"

namespace dilemma_lab {
namespace {

using testing::ScheduleGame;

std::vector<const Policy*> Repeat(const Policy& p, int n) {
  return std::vector<const Policy*>(n, &p);
}

TEST(RolloutTest, AllZeroRewards) {
  ScheduleGame game({{0.0, 0.0}, {0.0, 0.0}}, 0.9);
  ConstantActionPolicy p(0);
  Rng rng(1);
  const auto r = Rollout(game, Repeat(p, 2), rng);
  EXPECT_EQ(r.returns, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.episode_length, 2);
}

TEST(RolloutTest, SingleStepIgnoresDiscount) {
  ScheduleGame game({{2.0, 1.0}}, 0.9);
  ConstantActionPolicy p(0);
  Rng rng(1);
  const auto r = Rollout(game, Repeat(p, 2), rng);
  EXPECT_DOUBLE_EQ(r.returns[0], 2.0);
  EXPECT_DOUBLE_EQ(r.returns[1], 1.0);
}

TEST(RolloutTest, TwoStepDiscountedSum) {
  ScheduleGame game({{1.0}, {1.0}}, 0.5);
  ConstantActionPolicy p(0);
  Rng rng(1);
  const auto r = Rollout(game, Repeat(p, 1), rng);
  EXPECT_DOUBLE_EQ(r.returns[0], 1.0 + 0.5 * 1.0);
  EXPECT_DOUBLE_EQ(r.undiscounted_returns[0], 2.0);
}

TEST(WelfareTest, SumOfRewards) {
  EXPECT_EQ(UtilitarianWelfare(std::vector<double>{0, 0, 0}), 0.0);
  std::vector<double> r{100, 200, 240};
  EXPECT_EQ(UtilitarianWelfare(r), 540.0);
  std::reverse(r.begin(), r.end());
  EXPECT_EQ(UtilitarianWelfare(r), 540.0);
}

TEST(StepTest, RejectsInvalidActionAndTerminalState) {
  ScheduleGame game({{1.0}}, 1.0, 2);
  Rng rng(1);
  State s = game.Reset(rng);
  EXPECT_THROW(game.Step(s, std::vector<int>{2}, rng), std::domain_error);
  EXPECT_THROW(game.Step(s, std::vector<int>{-1}, rng), std::domain_error);
  EXPECT_THROW(game.Step(s, std::vector<int>{0, 0}, rng), std::domain_error);
  const auto out = game.Step(s, std::vector<int>{1}, rng);
  EXPECT_TRUE(out.terminal);
  EXPECT_THROW(game.Step(out.next_state, std::vector<int>{0}, rng),
               std::logic_error);
}

TEST(MatrixGameTest, PrisonersDilemmaLookups) {
  const auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 1);
  Rng rng(0);
  ConstantActionPolicy c(0), d(1);
  auto play = [&](const Policy& a, const Policy& b) {
    const Policy* ps[] = {&a, &b};
    return Rollout(*game, ps, rng).returns;
  };
  EXPECT_EQ(play(c, c), (std::vector<double>{3, 3}));
  EXPECT_EQ(play(c, d), (std::vector<double>{0, 5}));
  EXPECT_EQ(play(d, c), (std::vector<double>{5, 0}));
  EXPECT_EQ(play(d, d), (std::vector<double>{1, 1}));
}

TEST(MatrixGameTest, RepeatedDefection) {
  const auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 10);
  EXPECT_EQ(game->gamma(), 1.0);
  ConstantActionPolicy d(1);
  Rng rng(0);
  const auto r = Rollout(*game, Repeat(d, 2), rng);
  EXPECT_EQ(r.returns, (std::vector<double>{10, 10}));
  EXPECT_EQ(r.episode_length, 10);
}

TEST(MatrixGameTest, SymmetryAndValidation) {
  EXPECT_TRUE(PrisonersDilemma(5, 3, 1, 0).IsSymmetric());
  EXPECT_TRUE(CommonInterestGame(3, 2, 0).IsSymmetric());
  // Battle of the sexes style asymmetry.
  MatrixGame asym("asym", {{"a", "b"}, {"a", "b"}},
                  {2, 1, 0, 0, 0, 0, 1, 2});
  EXPECT_FALSE(asym.IsSymmetric());
  EXPECT_THROW(MatrixGame("bad", {{"a"}, {"a"}}, {1.0}),
               std::invalid_argument);
  EXPECT_THROW(MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 0),
               std::invalid_argument);
}

TEST(MatrixGameTest, JointIndexRoundTrip) {
  const MatrixGame g = CommonInterestGame(3, 1, 0);
  for (int j = 0; j < g.num_joint_actions(); ++j) {
    EXPECT_EQ(g.JointIndex(g.JointAction(j)), j);
  }
}

TEST(PggTest, PayoffExamples) {
  PGGParams p{4, 3.0, 2.0, 0.5, 11};
  for (double v : PggPayoffs(std::vector<double>(4, 0.0), p)) EXPECT_EQ(v, 1.0);
  for (double v : PggPayoffs(std::vector<double>(4, 0.5), p)) {
    EXPECT_NEAR(v, 0.5 + 0.25 * (4 * 1.5), 1e-12);
  }
  for (double v : PggPayoffs(std::vector<double>(4, 1.0), p)) {
    EXPECT_NEAR(v, 0.0 + 0.25 * (4 * (1.5 + 1.0)), 1e-12);
  }
  EXPECT_THROW(PggPayoffs(std::vector<double>{0, 0, 0, 1.5}, p),
               std::domain_error);
  EXPECT_THROW(PggPayoffs(std::vector<double>{0, 0, 0, -0.1}, p),
               std::domain_error);
}

TEST(PggTest, ParameterOrdering) {
  EXPECT_THROW(ValidatePgg({10, 2.0, 5.0, 0.5, 11}), std::invalid_argument);
  EXPECT_THROW(ValidatePgg({4, 5.0, 2.0, 0.5, 11}), std::invalid_argument);
  EXPECT_THROW(ValidatePgg({4, 3.0, 1.0, 0.5, 11}), std::invalid_argument);
  EXPECT_THROW(ValidatePgg({4, 3.0, 2.0, 0.0, 11}), std::invalid_argument);
  EXPECT_NO_THROW(ValidatePgg({10, 5.0, 2.0, 0.5, 11}));
}

TEST(PggTest, PermutationInvarianceAndZeroDominance) {
  PGGParams p{4, 3.0, 2.0, 0.5, 11};
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(4);
    for (auto& x : c) x = UniformInt(rng, 11) / 10.0;
    const double own = PggPayoffs(c, p)[0];
    std::vector<int> idx{1, 2, 3};
    Shuffle(rng, idx);
    std::vector<double> permuted{c[0], c[idx[0]], c[idx[1]], c[idx[2]]};
    EXPECT_NEAR(PggPayoffs(permuted, p)[0], own, 1e-12);
    // Own payoff strictly decreases along the contribution grid.
    double prev = 1e9;
    for (int a = 0; a <= 10; ++a) {
      c[0] = a / 10.0;
      const double v = PggPayoffs(c, p)[0];
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(MiniCommonsTest, ResetFullStock) {
  MiniCommons game({4, 2, 6, 0.1, 200});
  Rng rng(0);
  const State s = game.Reset(rng);
  EXPECT_EQ(game.Stock(s, 0), 6);
  EXPECT_EQ(game.Stock(s, 1), 6);
  EXPECT_EQ(game.DepletedCount(s), 0);
}

TEST(MiniCommonsTest, HarvestAndRegrowthProbability) {
  MiniCommons game({1, 2, 6, 0.1, 200});
  State s{{3, 6, 0, 0}, 0, false};
  EXPECT_DOUBLE_EQ(game.RegrowthProbability(2), 0.1 * 2.0 / 6.0);
  EXPECT_EQ(game.RegrowthProbability(6), 0.0);
  int regrew = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(t);
    const auto out = game.Step(s, std::vector<int>{1}, rng);
    EXPECT_EQ(out.rewards[0], 1.0);
    const int stock = game.Stock(out.next_state, 0);
    ASSERT_TRUE(stock == 2 || stock == 3);
    regrew += stock == 3;
  }
  const double p = 0.1 * 2.0 / 6.0;
  EXPECT_NEAR(static_cast<double>(regrew) / trials, p,
              5 * std::sqrt(p * (1 - p) / trials));
}

TEST(MiniCommonsTest, DepletionIsAbsorbing) {
  MiniCommons game({1, 2, 6, 1.0, 50});
  State s{{1, 6, 0, 0}, 0, false};
  Rng rng(5);
  auto out = game.Step(s, std::vector<int>{1}, rng);
  EXPECT_EQ(game.Stock(out.next_state, 0), 0);
  EXPECT_TRUE(game.Depleted(out.next_state, 0));
  State cur = out.next_state;
  while (!cur.terminal) {
    cur = game.Step(cur, std::vector<int>{0}, rng).next_state;
    EXPECT_EQ(game.Stock(cur, 0), 0);
    EXPECT_TRUE(game.Depleted(cur, 0));
  }
}

TEST(MiniCommonsTest, RewardEqualsApplesRemoved) {
  MiniCommons game({4, 2, 6, 0.3, 200});
  Rng rng(11);
  for (int ep = 0; ep < 20; ++ep) {
    State s = game.Reset(rng);
    double rewards = 0.0;
    int removed = 0;
    while (!s.terminal) {
      std::vector<int> joint(4);
      for (auto& a : joint) a = UniformInt(rng, 3);
      const int before = game.TotalStock(s);
      // Count harvests by replaying the step's effect: stock change minus
      // regrowth (at most one apple per patch).
      const auto out = game.Step(s, joint, rng);
      const double r = std::accumulate(out.rewards.begin(), out.rewards.end(), 0.0);
      const int after = game.TotalStock(out.next_state);
      EXPECT_GE(after, before - static_cast<int>(r));
      EXPECT_LE(after, before - static_cast<int>(r) + 2);
      rewards += r;
      removed += static_cast<int>(r);
      s = out.next_state;
    }
    EXPECT_EQ(rewards, removed);
  }
}

TEST(MiniCommonsTest, SameSeedSameTrace) {
  MiniCommons game({4, 2, 6, 0.1, 200});
  auto trace = [&](std::uint64_t seed) {
    Rng rng(seed);
    State s = game.Reset(rng);
    std::vector<State> states{s};
    while (!s.terminal) {
      std::vector<int> joint(4);
      for (auto& a : joint) a = UniformInt(rng, 3);
      s = game.Step(s, joint, rng).next_state;
      states.push_back(s);
    }
    return states;
  };
  EXPECT_EQ(trace(9), trace(9));
}

TEST(MiniCleanupTest, ResetAndGrowthThreshold) {
  MiniCleanup game(MiniCleanupParams{});
  Rng rng(0);
  const State s = game.Reset(rng);
  EXPECT_EQ(game.Pollution(s), 0.0);
  for (int level = 0; level < game.params().levels; ++level) {
    const double pollution = game.PollutionAt(level);
    if (pollution >= 0.4) {
      EXPECT_EQ(game.AppleGrowthProbability(level), 0.0) << level;
    } else {
      EXPECT_GT(game.AppleGrowthProbability(level), 0.0) << level;
    }
  }
}

TEST(MiniCleanupTest, CleaningLowersPollutionOneLevelPerCleaner) {
  MiniCleanupParams p;
  p.pollution_rate = 0.0;
  MiniCleanup game(p);
  State s{{10, 0}, 0, false};
  Rng rng(0);
  std::vector<int> joint{MiniCleanup::kClean, MiniCleanup::kClean,
                         MiniCleanup::kNoop, MiniCleanup::kHarvest};
  EXPECT_EQ(game.Level(game.Step(s, joint, rng).next_state), 8);
}

TEST(MiniMushroomsTest, BlueRewardsCoPlayers) {
  MiniMushroomsParams p;
  MiniMushrooms game(p);
  State s{{0, 0, 1, 0, 0, 0, 0, 0}, 0, false};
  Rng rng(0);
  std::vector<int> joint(5, MiniMushrooms::kNoop);
  joint[0] = MiniMushrooms::EatAction(Mushroom::kBlue);
  const auto out = game.Step(s, joint, rng);
  EXPECT_NEAR(out.rewards[0], 0.0, 1e-12);
  for (int i = 1; i < 5; ++i) EXPECT_NEAR(out.rewards[i], 3.0 / 4.0, 1e-12);
}

TEST(MiniMushroomsTest, EventRewardTotals) {
  MiniMushrooms game(MiniMushroomsParams{});
  Rng rng(2);
  const std::array<double, 4> totals{1.0, 2.0, 3.0, 0.0};
  for (int colour = 0; colour < 4; ++colour) {
    for (int eater = 0; eater < 5; ++eater) {
      State s{{1, 1, 1, 1, 0, 0, 0, 0}, 0, false};
      std::vector<int> joint(5, MiniMushrooms::kNoop);
      joint[eater] = colour + 1;
      const auto out = game.Step(s, joint, rng);
      EXPECT_NEAR(UtilitarianWelfare(out.rewards), totals[colour], 1e-9);
    }
  }
}

TEST(MiniMushroomsTest, OrangeDestroysRed) {
  MiniMushroomsParams p;
  p.base_rate = {0, 0, 0, 0};
  MiniMushrooms game(p);
  State s{{3, 1, 1, 1, 0, 0, 0, 0}, 0, false};
  Rng rng(0);
  std::vector<int> joint(5, MiniMushrooms::kNoop);
  joint[2] = MiniMushrooms::EatAction(Mushroom::kOrange);
  const auto out = game.Step(s, joint, rng);
  EXPECT_EQ(game.Count(out.next_state, Mushroom::kRed), 0);
  EXPECT_EQ(UtilitarianWelfare(out.rewards), 0.0);
}

TEST(RegistryTest, BuildsEveryEnvironment) {
  for (const char* id : kEnvironmentIds) {
    EnvironmentSpec spec{id, 0, nlohmann::json::object()};
    if (std::string(id) == "matrix") {
      spec.params = {{"game", "pd"}, {"payoffs", {5, 3, 1, 0}}};
    }
    const auto game = MakeGame(spec);
    EXPECT_EQ(game->num_players(), ResolvedPlayerCount(spec)) << id;
    EXPECT_TRUE(game->symmetric()) << id;
  }
}

TEST(RegistryTest, RejectsUnknownIdsAndKeys) {
  EXPECT_THROW(MakeGame({"nope", 0, nlohmann::json::object()}),
               std::invalid_argument);
  try {
    MakeGame({"mini_commons", 0, {{"capacty", 3}}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("capacty"), std::string::npos);
  }
}

}  // namespace
}  // namespace dilemma_lab
