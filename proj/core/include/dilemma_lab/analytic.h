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

#ifndef DILEMMA_LAB_ANALYTIC_H_
#define DILEMMA_LAB_ANALYTIC_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilemma_lab/matrix_game.h"
#include "dilemma_lab/pgg.h"

namespace dilemma_lab {

// Piece of the partition of (0, 1]. Endpoints are exact; `*_text` hold the
// rational form, e.g. "3/5".
struct Regime {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = false;
  bool hi_closed = true;
  std::string lo_text, hi_text;
  std::string label;
};

struct AnalyticResult {
  std::string game;
  std::vector<Regime> regimes;       // sorted, partitioning (0, 1]
  std::vector<double> boundaries;    // points where the label changes
  std::string cooperative_label;     // label whose supremum defines s*
  // Supremum of s at which the cooperative label holds; empty if it never
  // does.
  std::optional<double> s_star;
  std::string s_star_text;
  bool s_star_closed = false;
  int evaluated_points = 0;
};

// Regimes of a matrix game under the exchange transform. Labels:
// "cooperate" (the cooperate action is a strict best response for every
// player against every co-player profile), "defect" (same for the defect
// action) or "none".
AnalyticResult AnalyzeMatrixGame(const MatrixGame& game, int cooperate_action,
                                 int defect_action, double s_resolution = 1e-3);

// Regimes of the threshold public goods game: "full" (contributing 1 is a
// strict best response against every co-player profile over {0, cx, 1}),
// "partial" (cx), "defect" (0), "none". Own actions range over the
// contribution grid plus {0, cx, 1}.
AnalyticResult AnalyzePgg(const PGGParams& params, double s_resolution = 1e-3);

nlohmann::json AnalyticResultToJson(const AnalyticResult& result);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_ANALYTIC_H_
