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

#include <vector>

#include <benchmark/benchmark.h>

#include "dilemma_lab/analytic.h"
#include "dilemma_lab/learners.h"
#include "dilemma_lab/registry.h"
#include "dilemma_lab/reward_exchange.h"
#include "dilemma_lab/stats.h"
#include "dilemma_lab/training.h"

namespace dilemma_lab {
namespace {

void BM_Exchange(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = i;
  const SelfInterest s(0.5, n);
  for (auto _ : state) {
    ExchangeInPlace(r, s);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_Exchange)->Arg(2)->Arg(4)->Arg(10);

void BM_EnvironmentEpisode(benchmark::State& state, const char* id) {
  const auto game = MakeGame({id, 0, nlohmann::json::object()});
  const auto policy = BuiltinPolicy({id, 0, nlohmann::json::object()},
                                    StrategyKind::kCooperate);
  const std::vector<const Policy*> policies(game->num_players(), policy.get());
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Rollout(*game, policies, rng));
  }
}
BENCHMARK_CAPTURE(BM_EnvironmentEpisode, commons, "mini_commons");
BENCHMARK_CAPTURE(BM_EnvironmentEpisode, cleanup, "mini_cleanup");
BENCHMARK_CAPTURE(BM_EnvironmentEpisode, mushrooms, "mini_mushrooms");

void BM_TrainCommons(benchmark::State& state) {
  const auto game = MakeGame({"mini_commons", 4, nlohmann::json::object()});
  LearnerSet learners;
  for (int i = 0; i < 4; ++i) learners.push_back(MakeLearner({}));
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        TrainStage(*game, learners, SelfInterest(0.5, 4), 10, rng));
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_TrainCommons)->Unit(benchmark::kMillisecond);

void BM_Dunnett(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const GroupSample control{1.0, {10, 11, 12, 13, 14}};
  std::vector<GroupSample> treatments;
  for (int j = 0; j < k; ++j) {
    treatments.push_back({0.5 - 0.01 * j, {9, 10, 11, 12, 13.0 + j}});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(DunnettOneSided(control, treatments));
  }
}
BENCHMARK(BM_Dunnett)->Arg(1)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_AnalyticPgg(benchmark::State& state) {
  const double resolution = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AnalyzePgg({10, 5.0, 2.0, 0.5, 11}, resolution));
  }
}
BENCHMARK(BM_AnalyticPgg)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AnalyticPd(benchmark::State& state) {
  const MatrixGame pd = PrisonersDilemma(5, 3, 1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(AnalyzeMatrixGame(pd, 0, 1));
  }
}
BENCHMARK(BM_AnalyticPd)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dilemma_lab
