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

#ifndef DILEMMA_LAB_DILEMMA_CHECK_H_
#define DILEMMA_LAB_DILEMMA_CHECK_H_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/game.h"
#include "dilemma_lab/policy.h"

namespace dilemma_lab {

// Raised for analyses the game does not support (e.g. asymmetric roles).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PolicyKind { kCooperate, kDefect };

// Interchangeable pool of policies implementing one behaviour.
struct PolicySet {
  PolicyKind kind = PolicyKind::kCooperate;
  std::vector<std::shared_ptr<const Policy>> policies;
};

inline constexpr int kDefaultEpisodesPerCell = 225;

// Payoffs are indexed by the number k of *other* cooperators a focal player
// faces: coop_mean[k] is the mean return of a cooperator among k cooperating
// co-players, defect_mean[k] that of a defector among k cooperating
// co-players (k = 0..n-1). welfare[m] is the mean collective return with m
// cooperators in total (m = 0..n), so
//   welfare[m] = m * coop_mean[m-1] + (n-m) * defect_mean[m].
struct SchellingDiagram {
  int n = 0;
  int episodes_per_cell = kDefaultEpisodesPerCell;
  std::vector<double> coop_mean, coop_se;
  std::vector<double> defect_mean, defect_se;
  std::vector<double> welfare, welfare_se;
};

// Samples episodes_per_cell episodes for every cooperator count; player
// slots are shuffled and pool members drawn uniformly per episode. Each cell
// has its own seed stream, so the result does not depend on `jobs`.
// Throws UnsupportedConfiguration for asymmetric games.
SchellingDiagram ComputeSchellingDiagram(const MarkovGame& game,
                                         const PolicySet& coop,
                                         const PolicySet& defect,
                                         int episodes_per_cell,
                                         std::uint64_t seed, int jobs = 1);

// CSV with '#' comment lines (episode count, indexing convention) followed
// by the header n_c,coop_mean,coop_se,defect_mean,defect_se,welfare,
// welfare_se. Row k holds the payoffs against k other cooperators and the
// welfare with k cooperators; undefined cells are empty.
std::string SchellingCsv(const SchellingDiagram& diagram);

struct ConditionResult {
  bool holds = false;
  nlohmann::json evidence;
};

struct DilemmaReport {
  ConditionResult condition1;  // welfare strictly increases in n_c
  ConditionResult condition2;  // some profile tempts defection
  ConditionResult condition3;  // mutual cooperation beats mutual defection
  bool verdict = false;
};

// `tolerance` multiplies the combined standard error of adjacent welfare
// cells in the condition-1 increase test.
DilemmaReport VerifyDilemma(const SchellingDiagram& diagram,
                            double tolerance = 2.0);

nlohmann::json DiagramToJson(const SchellingDiagram& diagram);
nlohmann::json DilemmaReportToJson(const DilemmaReport& report);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_DILEMMA_CHECK_H_
