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

#include <gtest/gtest.h>

#include "dilemma_lab/estimator.h"

namespace dilemma_lab {
namespace {

TEST(BoundCheckTest, Boundaries) {
  for (int n = 1; n <= 10; ++n) {
    EXPECT_TRUE(BoundCheck(1.0 / n, n));
    EXPECT_TRUE(BoundCheck(1.0, n));
    EXPECT_FALSE(BoundCheck(1.0 / (n + 1), n));
    EXPECT_FALSE(BoundCheck(1.0001, n));
  }
  EXPECT_TRUE(BoundCheck(SelfInterest::TeamReward(4), 4));
}

EstimatorConfig CommonInterest() {
  EstimatorConfig c;
  c.environment = {"matrix",
                   0,
                   {{"game", "common_interest"},
                    {"players", 2},
                    {"high", 2},
                    {"low", 0},
                    {"repeats", 5}}};
  c.pretrain_episodes = 500;
  c.episodes_per_stage = 500;
  c.dunnett.draws = 20000;
  return c;
}

TEST(ResolveConfigTest, FieldNamesInErrors) {
  auto expect_message = [](EstimatorConfig c, const std::string& field) {
    try {
      ResolveConfig(c);
      ADD_FAILURE() << "accepted config missing " << field;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos)
          << e.what();
    }
  };
  EstimatorConfig c = CommonInterest();
  c.environment.id = "";
  expect_message(c, "environment.id");
  c = CommonInterest();
  c.s_values = {0.7, 0.6};
  expect_message(c, "schedule.s_values");
  c = CommonInterest();
  c.s_values = {1.0, 0.2};
  expect_message(c, "schedule.s_values");
  c = CommonInterest();
  c.seeds = {1};
  expect_message(c, "seeds");
  c = CommonInterest();
  c.alpha = 0.0;
  expect_message(c, "alpha");
}

TEST(ResolveConfigTest, Defaults) {
  EstimatorConfig c;
  c.environment = {"mini_commons", 4, {}};
  const auto r = ResolveConfig(c);
  EXPECT_EQ(r.pretrain_counts, (std::vector<int>{1, 2, 3, 4}));
  ASSERT_EQ(r.s_values.size(), 10u);
  EXPECT_EQ(r.s_values.front(), 1.0);
  EXPECT_NEAR(r.s_values.back(), 0.25, 1e-15);
  const auto plans = EstimationPlans(r);
  EXPECT_EQ(plans.size(), 4u + 9u);
  EXPECT_EQ(plans[3].label, "pretrain_n4");
  EXPECT_TRUE(plans[3].pretrain);
  EXPECT_FALSE(plans[4].pretrain);
}

TEST(EstimateTest, CommonInterestSelectsFullSelfInterest) {
  EstimatorConfig c = CommonInterest();
  c.s_values = {1.0};
  const auto report = EstimateMarkov(c);
  EXPECT_EQ(report.selection.s_star, 1.0);
  EXPECT_TRUE(BoundCheck(report.selection.s_star, 2));
  EXPECT_EQ(FormatInterval(report.selection), "[1, 1]");
}

TEST(EstimateTest, ReportJsonRoundTrip) {
  EstimatorConfig c = CommonInterest();
  c.s_values = {1.0, 0.5};
  const auto report = EstimateMarkov(c);
  const auto j = EstimationReportToJson(report);
  EXPECT_FALSE(j.contains("wall_seconds"));
  const auto back = EstimationReportFromJson(j);
  EXPECT_EQ(back.selection.s_star, report.selection.s_star);
  EXPECT_EQ(back.samples.size(), report.samples.size());
  EXPECT_EQ(j["bracket"], FormatInterval(report.selection));
  EXPECT_TRUE(j["monotonicity_audit"]["passed"].get<bool>());
}

TEST(EstimateTest, ParallelSeedsMatchSerial) {
  EstimatorConfig c = CommonInterest();
  c.s_values = {1.0, 0.5};
  c.pretrain_episodes = c.episodes_per_stage = 100;
  const auto serial = EstimationReportToJson(EstimateMarkov(c));
  c.jobs = 3;
  EXPECT_EQ(EstimationReportToJson(EstimateMarkov(c)), serial);
}

TEST(ValidateTest, SinglePlayerArmsCoincide) {
  EstimatorConfig c;
  c.environment = {"mini_commons", 1, {{"horizon", 20}}};
  c.pretrain_episodes = 50;
  c.episodes_per_stage = 50;
  c.validation_episodes = 60;
  c.s_values = {1.0};
  c.seeds = {0, 1};
  const auto prior = EstimateMarkov(c);
  const auto v = ValidateWithoutCurriculum(c, prior);
  ASSERT_EQ(v.arms.size(), 4u);
  for (const auto& arm : v.arms) {
    EXPECT_EQ(arm.s, 1.0) << arm.name;
    EXPECT_EQ(arm.trajectories, v.arms[0].trajectories) << arm.name;
  }
  EXPECT_EQ(v.episodes, 60);
}

TEST(ValidateTest, EnvironmentMismatchRejected) {
  EstimatorConfig c = CommonInterest();
  EstimationReport prior;
  prior.game = "mini_commons";
  prior.num_players = 4;
  EXPECT_THROW(ValidateWithoutCurriculum(c, prior), std::invalid_argument);
}

}  // namespace
}  // namespace dilemma_lab
