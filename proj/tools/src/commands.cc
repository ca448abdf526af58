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

#include "commands.h"

#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "config.h"
#include "dilemma_lab/analytic.h"
#include "dilemma_lab/dilemma_check.h"
#include "dilemma_lab/estimator.h"
#include "dilemma_lab/matrix_game.h"
#include "dilemma_lab/registry.h"
#include "run_dir.h"

namespace dilemma_lab::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Training or evaluation failed after the configuration was accepted.
class StageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kEvaluationStream = 0x6576616cULL;
constexpr std::uint64_t kSchellingStream = 0x7363686cULL;

ExperimentConfig LoadConfig(const CommandOptions& opt) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  // Apply command-line overrides before resolution so they are validated
  // like any other field.
  json tree = ReadStructuredFile(opt.config);
  if (!tree.is_object()) throw ConfigError("config must be a mapping");
  if (opt.jobs) tree["jobs"] = *opt.jobs;
  ExperimentConfig c =
      ParseExperimentConfig(tree, fs::path(opt.config).stem().string());
  if (opt.seed_offset) {
    for (auto& s : c.estimator.seeds) {
      const long long shifted = static_cast<long long>(s) + *opt.seed_offset;
      if (shifted < 0) throw ConfigError("--seed-offset makes a seed negative");
      s = static_cast<std::uint64_t>(shifted);
    }
    try {
      c.estimator = ResolveConfig(c.estimator);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

fs::path RunDirFor(const ExperimentConfig& c, const CommandOptions& opt) {
  return ResolveOutputRoot(opt.out, c.output_dir) / c.name;
}

// Creates or reopens the run directory. A fresh run replaces a previous run
// directory of the same name; --resume requires one with the same config.
void PrepareRunDir(const fs::path& dir, const json& config, bool resume) {
  const fs::path stored = dir / "config.json";
  if (resume) {
    if (!fs::exists(stored)) {
      throw ConfigError("--resume: no run directory at " + dir.string());
    }
    if (ReadJsonFile(stored) != config) {
      throw ConfigError("--resume: config differs from " + stored.string());
    }
    return;
  }
  if (fs::exists(dir)) {
    if (!fs::exists(stored) && !fs::is_empty(dir)) {
      throw ConfigError("refusing to overwrite non-run directory " +
                        dir.string());
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  AtomicWriteJson(stored, config);
}

void WriteTiming(const fs::path& dir, const std::string& command,
                 Clock::time_point start) {
  const double secs =
      std::chrono::duration<double>(Clock::now() - start).count();
  AtomicWriteJson(dir / "timing.json",
                  {{"command", command}, {"wall_seconds", secs}});
}

std::string EvaluationCsv(const ExperimentConfig& c,
                          const std::vector<StagePlan>& plans,
                          const std::vector<TrainingRun>& runs) {
  std::string out = "seed,stage,s,collective_mean,collective_sd\n";
  if (c.evaluation_episodes == 0) return out;
  const GameFactory factory = MakeGameFamily(c.estimator.environment);
  for (const auto& run : runs) {
    for (int k = 0; k < static_cast<int>(plans.size()); ++k) {
      const auto game = factory(plans[k].num_players);
      const LearnerSet learners =
          LearnersFromCheckpoint(run.stages[k].checkpoint);
      Rng rng(DeriveSeed(DeriveSeed(run.seed, kEvaluationStream), k));
      const Evaluation ev =
          EvaluateGreedy(*game, learners, c.evaluation_episodes, rng);
      out += std::to_string(run.seed) + "," + plans[k].label + "," +
             FormatNumber(plans[k].s) + "," + FormatNumber(ev.collective_mean) +
             "," + FormatNumber(ev.collective_sd) + "\n";
    }
  }
  return out;
}

int Train(const std::string& command, const CommandOptions& opt,
          std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const ExperimentConfig c = LoadConfig(opt);
  const fs::path dir = RunDirFor(c, opt);
  PrepareRunDir(dir, ExperimentConfigToJson(c), opt.resume);

  const auto plans = command == "pretrain" ? PretrainPlans(c.estimator)
                                           : EstimationPlans(c.estimator);
  DirectoryStageStore store(dir / "checkpoints");
  std::vector<TrainingRun> runs;
  try {
    runs = RunSeeds(c.estimator, plans, &store);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(std::string(e.what()) +
                       " (completed stages are checkpointed; rerun with "
                       "--resume)");
  }
  AtomicWrite(dir / "welfare.csv", WelfareCsv(runs));
  AtomicWrite(dir / "evaluation.csv", EvaluationCsv(c, plans, runs));

  if (command == "estimate") {
    const EstimationReport report = BuildReport(c.estimator, plans, runs);
    AtomicWriteJson(dir / "report.json", EstimationReportToJson(report));
    out << "s* = " << FormatNumber(report.selection.s_star) << " in "
        << FormatInterval(report.selection) << "\n";
    if (!report.team_reference.non_inferior) {
      err << "warning: s* welfare is significantly below the team-reward "
             "stage\n";
    }
    if (!report.audit_violations.empty()) {
      err << "warning: monotonicity audit flagged "
          << report.audit_violations.size() << " stage(s)\n";
    }
  } else {
    out << "trained " << plans.size() << " stage(s) for "
        << c.estimator.seeds.size() << " seed(s) in " << dir.string()
        << "\n";
  }
  WriteTiming(dir, command, start);
  WriteManifest(dir);
  return kExitOk;
}

int Validate(const CommandOptions& opt, std::ostream& out) {
  const auto start = Clock::now();
  const ExperimentConfig c = LoadConfig(opt);
  const fs::path dir = RunDirFor(c, opt);
  const fs::path report_path = dir / "report.json";
  if (!fs::exists(report_path)) {
    throw ConfigError("validate needs a prior estimate report at " +
                      report_path.string());
  }
  if (ReadJsonFile(dir / "config.json") != ExperimentConfigToJson(c)) {
    throw ConfigError("config differs from the estimated run in " +
                      dir.string());
  }
  const EstimationReport prior =
      EstimationReportFromJson(ReadJsonFile(report_path));
  const fs::path vdir = dir / "validation";
  if (!opt.resume && fs::exists(vdir)) fs::remove_all(vdir);

  const std::vector<std::string> arm_names = {"selfish", "s_star", "s_plus",
                                              "team"};
  std::vector<std::unique_ptr<DirectoryStageStore>> stores;
  for (const auto& name : arm_names) {
    stores.push_back(std::make_unique<DirectoryStageStore>(vdir / name));
  }
  ValidationReport report;
  try {
    report = ValidateWithoutCurriculum(
        c.estimator, prior, [&](int arm) { return stores.at(arm).get(); });
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(e.what());
  }
  std::string csv = "arm,seed,s,episode,collective_reward\n";
  for (const auto& arm : report.arms) {
    for (std::size_t i = 0; i < arm.trajectories.size(); ++i) {
      const std::string prefix = arm.name + "," +
                                 std::to_string(c.estimator.seeds[i]) + "," +
                                 FormatNumber(arm.s) + ",";
      for (std::size_t e = 0; e < arm.trajectories[i].size(); ++e) {
        csv += prefix + std::to_string(e) + "," +
               FormatNumber(arm.trajectories[i][e]) + "\n";
      }
    }
  }
  AtomicWrite(vdir / "welfare.csv", csv);
  const json j = ValidationReportToJson(report);
  AtomicWriteJson(vdir / "report.json", j);
  for (const auto& arm : j.at("arms")) {
    out << arm.at("arm").get<std::string>() << " s=" << arm.at("s").dump()
        << (arm.at("control").get<bool>() ? " (control)" : "");
    if (arm.contains("p")) out << " p=" << arm.at("p").dump();
    out << "\n";
  }
  WriteTiming(dir, "validate", start);
  WriteManifest(dir);
  return kExitOk;
}

// Pool from "builtin", "<run_dir>" or "<run_dir>#<stage label>".
PolicySet LoadPool(const std::string& source, PolicyKind kind,
                   const ExperimentConfig& c) {
  PolicySet pool;
  pool.kind = kind;
  const EnvironmentSpec& env = c.estimator.environment;
  if (source == "builtin") {
    pool.policies.push_back(BuiltinPolicy(
        env, kind == PolicyKind::kCooperate ? StrategyKind::kCooperate
                                            : StrategyKind::kDefect));
    return pool;
  }
  std::string path = source, label;
  if (const auto hash = source.rfind('#'); hash != std::string::npos) {
    path = source.substr(0, hash);
    label = source.substr(hash + 1);
  }
  const fs::path dir(path);
  if (!fs::exists(dir / "config.json")) {
    throw ConfigError("policy source " + path + " is not a run directory");
  }
  const ExperimentConfig stored = ParseExperimentConfig(
      ReadJsonFile(dir / "config.json"), dir.filename().string());
  const EnvironmentSpec& senv = stored.estimator.environment;
  if (senv.id != env.id || senv.num_players != env.num_players ||
      senv.params != env.params) {
    throw ConfigError("policy source " + path +
                      " was trained on a different environment");
  }
  const auto plans = EstimationPlans(stored.estimator);
  const int last_pretrain =
      static_cast<int>(stored.estimator.pretrain_counts.size()) - 1;
  int index = -1;
  if (!label.empty()) {
    for (int k = 0; k < static_cast<int>(plans.size()); ++k) {
      if (plans[k].label == label) index = k;
    }
    if (index < 0) throw ConfigError("no stage '" + label + "' in " + path);
  } else if (kind == PolicyKind::kDefect) {
    index = last_pretrain;
  } else {
    if (!fs::exists(dir / "report.json")) {
      throw ConfigError(path + " has no report.json; name a stage with #");
    }
    const double s_star =
        ReadJsonFile(dir / "report.json").at("s_star").get<double>();
    index = last_pretrain;
    for (int k = last_pretrain + 1; k < static_cast<int>(plans.size()); ++k) {
      if (plans[k].s == s_star) index = k;
    }
  }
  if (plans[index].num_players != env.num_players) {
    throw ConfigError("stage '" + plans[index].label + "' in " + path +
                      " has a different player count");
  }
  DirectoryStageStore store(dir / "checkpoints");
  for (std::uint64_t seed : stored.estimator.seeds) {
    auto record = store.Load(seed, index);
    if (!record) {
      throw ConfigError("missing checkpoint for seed " + std::to_string(seed) +
                        " stage " + plans[index].label + " in " + path);
    }
    for (auto& learner : LearnersFromCheckpoint(record->checkpoint)) {
      pool.policies.push_back(std::make_shared<GreedyPolicy>(
          std::shared_ptr<const Learner>(std::move(learner))));
    }
  }
  return pool;
}

int Schelling(const CommandOptions& opt, std::ostream& out) {
  const auto start = Clock::now();
  const ExperimentConfig c = LoadConfig(opt);
  const fs::path dir = RunDirFor(c, opt) / "schelling";
  const PolicySet coop = LoadPool(opt.coop_from, PolicyKind::kCooperate, c);
  const PolicySet defect = LoadPool(opt.defect_from, PolicyKind::kDefect, c);
  const auto game = MakeGame(c.estimator.environment);
  SchellingDiagram diagram;
  try {
    diagram = ComputeSchellingDiagram(
        *game, coop, defect, c.schelling.episodes_per_cell,
        DeriveSeed(c.estimator.seeds.front(), kSchellingStream),
        c.estimator.jobs);
  } catch (const UnsupportedConfiguration& e) {
    throw ConfigError(e.what());
  }
  const DilemmaReport report = VerifyDilemma(diagram, c.schelling.tolerance);
  fs::create_directories(dir);
  AtomicWrite(dir / "schelling.csv", SchellingCsv(diagram));
  json j = DilemmaReportToJson(report);
  j["diagram"] = DiagramToJson(diagram);
  j["sources"] = {{"cooperate", opt.coop_from}, {"defect", opt.defect_from}};
  AtomicWriteJson(dir / "dilemma_report.json", j);
  out << "condition1 " << (report.condition1.holds ? "holds" : "fails")
      << ", condition2 " << (report.condition2.holds ? "holds" : "fails")
      << ", condition3 " << (report.condition3.holds ? "holds" : "fails")
      << ": " << (report.verdict ? "a social dilemma" : "not a dilemma")
      << "\n";
  WriteTiming(dir, "schelling", start);
  WriteManifest(dir);
  return kExitOk;
}

// "pgg n=10 k1=5 k2=2 cx=0.5 [grid=11]" | "pd T R P S".
json ParseInlineGame(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  std::vector<std::string> rest;
  for (std::string tok; in >> tok;) rest.push_back(tok);
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw ConfigError("not a number: '" + s + "'");
    }
    return v;
  };
  if (kind == "pd") {
    if (rest.size() != 4) throw ConfigError("pd needs T R P S");
    json payoffs = json::array();
    for (const auto& r : rest) payoffs.push_back(number(r));
    return {{"game", "pd"}, {"payoffs", payoffs}};
  }
  if (kind == "pgg") {
    json j{{"game", "pgg"}};
    for (const auto& tok : rest) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key=value: " + tok);
      const std::string key = tok.substr(0, eq);
      const double v = number(tok.substr(eq + 1));
      if (key == "n" || key == "grid") {
        j[key] = static_cast<int>(v);
      } else {
        j[key] = v;
      }
    }
    return j;
  }
  throw ConfigError("unknown game '" + kind + "' (expected pgg or pd)");
}

int Analytic(const CommandOptions& opt, std::ostream& out) {
  json spec;
  if (!opt.game.empty()) {
    spec = ParseInlineGame(opt.game);
  } else if (!opt.config.empty()) {
    spec = ReadStructuredFile(opt.config);
  } else {
    throw ConfigError("analytic needs a game spec or --config");
  }
  if (!spec.is_object() || !spec.contains("game")) {
    throw ConfigError("missing field 'game'");
  }
  AnalyticResult result;
  try {
    if (spec.at("game") == "pgg") {
      const std::set<std::string> allowed{"game", "n", "k1", "k2", "cx",
                                          "grid"};
      for (const auto& [k, v] : spec.items()) {
        if (!allowed.contains(k)) throw ConfigError("unknown key '" + k + "'");
      }
      PGGParams p;
      if (!spec.contains("n")) throw ConfigError("missing field 'n'");
      p.n = spec.at("n").get<int>();
      p.k1 = spec.value("k1", p.k1);
      p.k2 = spec.value("k2", p.k2);
      p.cx = spec.value("cx", p.cx);
      p.grid = spec.value("grid", p.grid);
      result = AnalyzePgg(p, opt.resolution);
    } else {
      json params = spec;
      int coop = 0, defect = 1;
      const MatrixGame game = MatrixGameFromJson(params);
      if (spec.contains("cooperate_action") || spec.contains("defect_action")) {
        auto find = [&](const std::string& label) {
          const auto& labels = game.labels().at(0);
          for (int a = 0; a < static_cast<int>(labels.size()); ++a) {
            if (labels[a] == label) return a;
          }
          throw ConfigError("unknown action label '" + label + "'");
        };
        coop = find(spec.value("cooperate_action", game.labels()[0][0]));
        defect = find(spec.value("defect_action", game.labels()[0][1]));
      }
      result = AnalyzeMatrixGame(game, coop, defect, opt.resolution);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const json j = AnalyticResultToJson(result);
  if (opt.out) AtomicWriteJson(fs::path(*opt.out) / "analytic.json", j);
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int RunCommand(const std::string& command, const CommandOptions& options,
               std::ostream& out, std::ostream& err) {
  try {
    if (command == "pretrain" || command == "train" || command == "estimate") {
      return Train(command, options, out, err);
    }
    if (command == "validate") return Validate(options, out);
    if (command == "schelling") return Schelling(options, out);
    if (command == "analytic") return Analytic(options, out);
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StageFailure& e) {
    err << "stage failure: " << e.what() << "\n";
    return kExitStageFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "stage failure: " << e.what() << "\n";
    return kExitStageFailure;
  }
}

}  // namespace dilemma_lab::cli
