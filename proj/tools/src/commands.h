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

#ifndef DILEMMA_LAB_TOOLS_COMMANDS_H_
#define DILEMMA_LAB_TOOLS_COMMANDS_H_

#include <optional>
#include <ostream>
#include <string>

namespace dilemma_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitStageFailure = 3;

struct CommandOptions {
  std::string config;
  bool resume = false;
  std::optional<int> jobs;
  std::optional<long long> seed_offset;
  std::optional<std::string> out;
  // Schelling policy sources: "builtin", "<run_dir>" or "<run_dir>#<stage>".
  std::string coop_from = "builtin";
  std::string defect_from = "builtin";
  // Analytic game, e.g. "pgg n=10 k1=5 k2=2 cx=0.5" or "pd 5 3 1 0".
  std::string game;
  double resolution = 1e-3;
};

// Runs one subcommand and returns its exit code. Diagnostics go to `err`,
// the command's primary result to `out`.
int RunCommand(const std::string& command, const CommandOptions& options,
               std::ostream& out, std::ostream& err);

}  // namespace dilemma_lab::cli

#endif  // DILEMMA_LAB_TOOLS_COMMANDS_H_
