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

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "dilemma_lab/learners.h"
#include "dilemma_lab/matrix_game.h"
#include "dilemma_lab/registry.h"
#include "dilemma_lab/training.h"
#include "test_games.h"

namespace dilemma_lab {
namespace {

using testing::ScheduleGame;

Transition T(std::uint64_t obs, int action, double reward,
             std::uint64_t next, bool terminal, int num_actions = 2) {
  return Transition{obs, action, reward, next, terminal, num_actions};
}

TEST(QUpdateTest, TerminalOverwrite) {
  QTable q;
  EXPECT_DOUBLE_EQ(QUpdate(q, T(0, 1, 5.0, 1, true), 1.0, 0.9), 5.0);
  EXPECT_DOUBLE_EQ(q.at(0)[1], 5.0);
  EXPECT_DOUBLE_EQ(q.at(0)[0], 0.0);
}

TEST(QUpdateTest, ZeroLearningRate) {
  QTable q;
  q[0] = {3.0, -1.0};
  q[1] = {10.0, 2.0};
  QUpdate(q, T(0, 0, 100.0, 1, false), 0.0, 0.9);
  EXPECT_EQ(q.at(0), (std::vector<double>{3.0, -1.0}));
}

TEST(QUpdateTest, BootstrapsFromNextMax) {
  QTable q;
  q[1] = {2.0, -4.0};
  // 0 + 0.5 * (1 + 0.9 * 2 - 0) = 1.4
  EXPECT_NEAR(QUpdate(q, T(0, 0, 1.0, 1, false), 0.5, 0.9), 1.4, 1e-12);
}

TEST(QLearnerTest, GreedyTiesBreakLow) {
  LearnerConfig c;
  QLearner learner(c);
  EXPECT_EQ(learner.Greedy(123, 4), 0);
  learner.Observe(T(5, 2, 1.0, 6, true, 4));
  learner.Observe(T(5, 3, 1.0, 6, true, 4));
  EXPECT_EQ(learner.Greedy(5, 4), 2);
}

TEST(QLearnerTest, EpsilonAnnealsWithinStage) {
  LearnerConfig c;
  QLearner learner(c);
  learner.BeginStage(101);
  learner.BeginEpisode(0);
  EXPECT_NEAR(learner.Epsilon(), 0.3, 1e-12);
  learner.BeginEpisode(100);
  EXPECT_NEAR(learner.Epsilon(), 0.02, 1e-12);
  learner.BeginStage(11);
  learner.BeginEpisode(0);
  EXPECT_NEAR(learner.Epsilon(), 0.3, 1e-12);
}

TEST(LearnerTest, ProbabilitiesSumToOne) {
  for (const char* id : {"q_learning", "reinforce"}) {
    LearnerConfig c;
    c.id = id;
    auto learner = MakeLearner(c);
    learner->Observe(T(0, 1, 2.0, 0, true, 3));
    learner->EndEpisode();
    const auto p = learner->ActionProbabilities(0, 3);
    double total = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << id;
  }
}

TEST(LearnerTest, ConfigValidation) {
  LearnerConfig c;
  c.alpha = -0.1;
  EXPECT_THROW(ValidateLearnerConfig(c), std::invalid_argument);
  c = {};
  c.gamma = 1.5;
  EXPECT_THROW(ValidateLearnerConfig(c), std::invalid_argument);
  c = {};
  c.id = "ppo";
  EXPECT_THROW(MakeLearner(c), std::invalid_argument);
}

TEST(LearnerTest, JsonRoundTripPreservesBehaviour) {
  for (const char* id : {"q_learning", "reinforce"}) {
    LearnerConfig c;
    c.id = id;
    auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 3);
    LearnerSet learners;
    learners.push_back(MakeLearner(c));
    learners.push_back(MakeLearner(c));
    Rng rng(3);
    TrainStage(*game, learners, SelfInterest(0.7, 2), 200, rng);

    LearnerSet restored;
    for (const auto& l : learners) {
      restored.push_back(LearnerFromJson(l->ToJson()));
      EXPECT_EQ(restored.back()->ToJson(), l->ToJson());
    }
    Rng a(9), b(9);
    const auto before = EvaluateGreedy(*game, learners, 5, a);
    const auto after = EvaluateGreedy(*game, restored, 5, b);
    EXPECT_EQ(before.mean_returns, after.mean_returns) << id;
    for (std::uint64_t obs = 0; obs < 3; ++obs) {
      EXPECT_EQ(learners[0]->ActionProbabilities(obs, 2),
                restored[0]->ActionProbabilities(obs, 2));
    }
  }
}

TEST(TrainStageTest, ZeroEpisodes) {
  ScheduleGame game({{1.0}}, 1.0);
  LearnerSet learners;
  learners.push_back(MakeLearner({}));
  const auto before = learners[0]->ToJson();
  Rng rng(0);
  EXPECT_TRUE(TrainStage(game, learners, SelfInterest(1.0, 1), 0, rng).empty());
  EXPECT_EQ(learners[0]->ToJson(), before);
}

TEST(TrainStageTest, ForcedBandit) {
  ScheduleGame game(std::vector<std::vector<double>>(10, {1.0}), 0.99);
  LearnerSet learners;
  learners.push_back(MakeLearner({}));
  Rng rng(0);
  const auto w = TrainStage(game, learners, SelfInterest(1.0, 1), 20, rng);
  ASSERT_EQ(w.size(), 20u);
  EXPECT_EQ(w.back(), 10.0);
}

// Best responses of the one-shot stage game.
int BestResponse(const MatrixGame& g, int player, int other, double s) {
  int best = 0;
  double best_value = -1e300;
  for (int a = 0; a < 2; ++a) {
    std::vector<int> joint(2);
    joint[player] = a;
    joint[1 - player] = other;
    const double v = s * g.Payoff(joint, player) +
                     (1 - s) * g.Payoff(joint, 1 - player);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

// Action that is a best response to every co-player action: the oracle for
// the learned joint policy.
int DominantAction(const MatrixGame& g, double s) {
  const int a0 = BestResponse(g, 0, 0, s);
  EXPECT_EQ(BestResponse(g, 0, 1, s), a0);
  EXPECT_EQ(BestResponse(g, 1, 0, s), a0);
  EXPECT_EQ(BestResponse(g, 1, 1, s), a0);
  return a0;
}

struct PdOutcome {
  std::vector<int> greedy;
  double collective_per_round;
};

PdOutcome TrainPd(double s, std::uint64_t seed) {
  const MatrixGame pd = PrisonersDilemma(5, 3, 1, 0);
  auto game = MatrixToMarkov(pd, 1);
  LearnerSet learners;
  learners.push_back(MakeLearner({}));
  learners.push_back(MakeLearner({}));
  Rng rng(seed);
  TrainStage(*game, learners, SelfInterest(s, 2), 3000, rng);
  Rng eval_rng(1);
  const auto e = EvaluateGreedy(*game, learners, 1, eval_rng);
  return {{learners[0]->Greedy(0, 2), learners[1]->Greedy(0, 2)},
          e.collective_mean};
}

TEST(TrainStageTest, SelfishPdConvergesToDominantDefection) {
  const MatrixGame pd = PrisonersDilemma(5, 3, 1, 0);
  const int oracle = DominantAction(pd, 1.0);
  ASSERT_EQ(oracle, 1);
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto out = TrainPd(1.0, seed);
    EXPECT_EQ(out.greedy, (std::vector<int>{oracle, oracle}));
    EXPECT_DOUBLE_EQ(out.collective_per_round, 2.0);
  }
}

TEST(TrainStageTest, TeamRewardPdCooperates) {
  const MatrixGame pd = PrisonersDilemma(5, 3, 1, 0);
  const int oracle = DominantAction(pd, 0.5);
  ASSERT_EQ(oracle, 0);
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto out = TrainPd(0.5, seed);
    EXPECT_EQ(out.greedy, (std::vector<int>{oracle, oracle}));
    EXPECT_DOUBLE_EQ(out.collective_per_round, 6.0);
  }
}

TEST(TrainStageTest, QValuesStayBounded) {
  auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 5);
  LearnerConfig c;
  c.gamma = 0.9;
  auto learner = std::make_unique<QLearner>(c);
  const QLearner* view = learner.get();
  LearnerSet learners;
  learners.push_back(std::move(learner));
  learners.push_back(MakeLearner(c));
  Rng rng(4);
  const double bound = 5.0 / (1.0 - 0.9);
  for (int chunk = 0; chunk < 10; ++chunk) {
    TrainStage(*game, learners, SelfInterest(0.75, 2), 100, rng);
    for (const auto& [obs, values] : view->table()) {
      for (double v : values) {
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_LE(std::abs(v), bound);
      }
    }
  }
}

// Same dynamics, but every player is paid the collective reward divided
// by n.
class TeamWiredGame final : public MarkovGame {
 public:
  explicit TeamWiredGame(std::shared_ptr<const MarkovGame> inner)
      : MarkovGame("team_wired", Labels(*inner), inner->horizon(),
                   inner->gamma()),
        inner_(std::move(inner)) {}

  State Reset(Rng& rng) const override { return inner_->Reset(rng); }
  std::uint64_t Observe(const State& s, int p) const override {
    return inner_->Observe(s, p);
  }

 protected:
  StepOutcome Transition(const State& state, std::span<const int> joint,
                         Rng& rng) const override {
    StepOutcome out = inner_->Step(state, joint, rng);
    const double mean = UtilitarianWelfare(out.rewards) / out.rewards.size();
    for (double& r : out.rewards) r = mean;
    return out;
  }

 private:
  static std::vector<std::vector<std::string>> Labels(const MarkovGame& g) {
    std::vector<std::vector<std::string>> labels;
    for (int p = 0; p < g.num_players(); ++p) labels.push_back(g.action_labels(p));
    return labels;
  }
  std::shared_ptr<const MarkovGame> inner_;
};

TEST(TrainStageTest, TeamRewardMatchesCollectiveWiring) {
  std::shared_ptr<const MarkovGame> pd =
      MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 4);
  TeamWiredGame wired(pd);
  for (std::uint64_t seed : {0, 5}) {
    LearnerSet a, b;
    for (int i = 0; i < 2; ++i) {
      a.push_back(MakeLearner({}));
      b.push_back(MakeLearner({}));
    }
    Rng ra(seed), rb(seed);
    TrainStage(*pd, a, SelfInterest::TeamReward(2), 1000, ra);
    TrainStage(wired, b, SelfInterest::Selfish(2), 1000, rb);
    for (int p = 0; p < 2; ++p) {
      for (std::uint64_t obs = 0; obs < 4; ++obs) {
        EXPECT_EQ(a[p]->Greedy(obs, 2), b[p]->Greedy(obs, 2));
      }
    }
  }
}

TEST(EvaluateTest, DeterministicGreedyHasZeroSpread) {
  auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 10);
  ConstantActionPolicy d(1);
  const Policy* ps[] = {&d, &d};
  Rng rng(0);
  const auto e = Evaluate(*game, ps, 7, rng);
  EXPECT_EQ(e.collective_mean, 20.0);
  EXPECT_EQ(e.collective_sd, 0.0);
  EXPECT_EQ(e.episodes, 7);
  Rng one(0);
  const auto single = Evaluate(*game, ps, 1, one);
  Rng roll(0);
  EXPECT_EQ(single.mean_returns, Rollout(*game, ps, roll).returns);
  EXPECT_THROW(Evaluate(*game, ps, 0, rng), std::invalid_argument);
}

class MemoryStore final : public StageStore {
 public:
  std::optional<StageRecord> Load(std::uint64_t seed, int index) override {
    const auto it = records.find({seed, index});
    if (it == records.end()) return std::nullopt;
    return it->second;
  }
  void Save(std::uint64_t seed, int index, const StageRecord& r) override {
    records[{seed, index}] = r;
  }
  std::map<std::pair<std::uint64_t, int>, StageRecord> records;
};

GameFactory CommonsFamily() {
  return MakeGameFamily({"mini_commons", 2, {{"horizon", 30}}});
}

TEST(RunStagesTest, SingleCountCurriculumEqualsTrainStage) {
  const auto factory = CommonsFamily();
  const std::vector<int> counts{1};
  const TrainingRun run = PretrainCurriculum(factory, counts, 50, {}, 7);
  ASSERT_EQ(run.stages.size(), 1u);
  EXPECT_EQ(run.stages[0].plan.label, "pretrain_n1");

  LearnerSet learners;
  learners.push_back(MakeLearner({}));
  Rng rng(DeriveSeed(7, 0));
  const auto welfare =
      TrainStage(*factory(1), learners, SelfInterest::Selfish(1), 50, rng);
  EXPECT_EQ(run.stages[0].welfare, welfare);
  EXPECT_EQ(run.stages[0].checkpoint["learners"][0], learners[0]->ToJson());
}

TEST(RunStagesTest, DeterministicAndClonesNewPlayers) {
  const auto factory = CommonsFamily();
  const std::vector<int> counts{1, 2};
  const auto a = PretrainCurriculum(factory, counts, 40, {}, 3);
  const auto b = PretrainCurriculum(factory, counts, 40, {}, 3);
  ASSERT_EQ(a.stages.size(), 2u);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(StageRecordToJson(a.stages[k]), StageRecordToJson(b.stages[k]));
  }
  EXPECT_EQ(a.stages[1].checkpoint["learners"].size(), 2u);
  EXPECT_NE(StageRecordToJson(a.stages[1]),
            StageRecordToJson(PretrainCurriculum(factory, counts, 40, {}, 4)
                                  .stages[1]));
}

TEST(RunStagesTest, ResumeMatchesUninterruptedRun) {
  const auto factory = CommonsFamily();
  const std::vector<int> counts{1, 2};
  auto plans = CurriculumPlans(counts, 30);
  const std::vector<double> s{0.75, 0.5};
  for (const auto& p : DescentPlans(2, s, 30)) plans.push_back(p);

  MemoryStore full;
  const auto reference = RunStages(factory, plans, {}, 11, &full);
  for (int cut = 1; cut < static_cast<int>(plans.size()); ++cut) {
    MemoryStore partial;
    for (int k = 0; k < cut; ++k) partial.records[{11, k}] = full.records[{11, k}];
    // Round-trip through JSON, as a persisted store would.
    for (auto& [key, record] : partial.records) {
      record = StageRecordFromJson(StageRecordToJson(record));
    }
    const auto resumed = RunStages(factory, plans, {}, 11, &partial);
    ASSERT_EQ(resumed.stages.size(), reference.stages.size());
    for (size_t k = 0; k < plans.size(); ++k) {
      EXPECT_EQ(StageRecordToJson(resumed.stages[k]),
                StageRecordToJson(reference.stages[k]))
          << "cut " << cut << " stage " << k;
    }
  }
}

TEST(RunStagesTest, SelfishStageMatchesExtendedPretraining) {
  auto game = MatrixToMarkov(PrisonersDilemma(5, 3, 1, 0), 2);
  LearnerSet a, b;
  for (int i = 0; i < 2; ++i) {
    a.push_back(MakeLearner({}));
    b.push_back(MakeLearner({}));
  }
  Rng ra(2), rb(2);
  const std::vector<double> stages{1.0};
  const auto records = TrainSelfInterestDescent(*game, a, stages, 100, ra);
  const auto welfare = TrainStage(*game, b, SelfInterest::Selfish(2), 100, rb);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].welfare, welfare);
}

TEST(PlansTest, Validation) {
  EXPECT_THROW(CurriculumPlans(std::vector<int>{1, 1}, 10),
               std::invalid_argument);
  EXPECT_THROW(DescentPlans(4, std::vector<double>{0.5, 0.6}, 10),
               std::invalid_argument);
  EXPECT_THROW(DescentPlans(4, std::vector<double>{0.2}, 10),
               std::invalid_argument);
  const auto plans = DescentPlans(4, std::vector<double>{0.5, 0.25}, 10);
  EXPECT_EQ(plans[1].label, "stage_1");
}

TEST(WindowTest, FinalWindowAndCollapse) {
  std::vector<double> w(100, 10.0);
  EXPECT_DOUBLE_EQ(FinalWindowMean(w), 10.0);
  for (int i = 95; i < 100; ++i) w[i] = 2.0;
  EXPECT_DOUBLE_EQ(FinalWindowMean(w), 2.0);
  EXPECT_TRUE(DetectCollapse(w));
  std::fill(w.begin(), w.end(), 3.0);
  EXPECT_FALSE(DetectCollapse(w));
  EXPECT_DOUBLE_EQ(FinalWindowMean(std::vector<double>{4.0, 6.0}), 6.0);
}

}  // namespace
}  // namespace dilemma_lab
