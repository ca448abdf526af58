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

// dilemma_lab: estimate self-interest levels of multi-agent social dilemmas.
//
//   dilemma_lab estimate --config configs/pd.yaml
//   dilemma_lab schelling --config configs/mushrooms.yaml
//   dilemma_lab analytic "pgg n=10 k1=5 k2=2 cx=0.5"

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using dilemma_lab::cli::CommandOptions;

void AddRunOptions(CLI::App* cmd, CommandOptions& opt) {
  cmd->add_option("--config", opt.config, "Experiment config (YAML or JSON)")
      ->required();
  cmd->add_flag("--resume", opt.resume,
                "Continue an existing run directory from its checkpoints");
  cmd->add_option("--jobs", opt.jobs, "Maximum parallel seeds or cells")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed-offset", opt.seed_offset, "Added to every seed");
  cmd->add_option("--out", opt.out,
                  "Output root (overrides $DILEMMA_LAB_OUT and the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-interest level estimation for social dilemmas"};
  app.require_subcommand(1);
  CommandOptions opt;

  AddRunOptions(app.add_subcommand("pretrain", "Run the s = 1 curriculum"),
                opt);
  AddRunOptions(
      app.add_subcommand("train", "Curriculum plus self-interest descent"),
      opt);
  AddRunOptions(app.add_subcommand(
                    "estimate", "Full pipeline; prints the s* bracket"),
                opt);
  AddRunOptions(app.add_subcommand(
                    "validate", "Train {1, s*, s+, 1/n} without curriculum"),
                opt);
  auto* schelling =
      app.add_subcommand("schelling", "Schelling diagram and dilemma check");
  AddRunOptions(schelling, opt);
  schelling->add_option("--coop-from", opt.coop_from,
                        "builtin | <run_dir> | <run_dir>#<stage>");
  schelling->add_option("--defect-from", opt.defect_from,
                        "builtin | <run_dir> | <run_dir>#<stage>");

  auto* analytic =
      app.add_subcommand("analytic", "Exact regimes of a normal-form game");
  analytic->add_option("game", opt.game,
                       "Inline game: \"pgg n=10 k1=5 k2=2 cx=0.5\" or "
                       "\"pd 5 3 1 0\"");
  analytic->add_option("--config", opt.config, "Game spec file");
  analytic->add_option("--resolution", opt.resolution, "s-grid spacing")
      ->check(CLI::Range(1e-6, 1.0));
  analytic->add_option("--out", opt.out, "Also write analytic.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dilemma_lab::cli::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return dilemma_lab::cli::RunCommand(command, opt, std::cout, std::cerr);
}
