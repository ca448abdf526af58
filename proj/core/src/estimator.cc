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

#include "dilemma_lab/estimator.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace dilemma_lab {
namespace {

using nlohmann::json;

bool FixedArity(const std::string& id) { return id == "matrix" || id == "pgg"; }

// Stream used by the estimation pipeline; validation arms use their own.
constexpr std::uint64_t kEstimateStream = 0;
constexpr std::uint64_t kValidationStream = 1;

GroupSample SampleForStage(const std::vector<TrainingRun>& runs, int stage,
                           double label) {
  GroupSample g;
  g.label = label;
  for (const auto& run : runs) {
    g.values.push_back(run.stages.at(stage).final_window_mean);
  }
  return g;
}

// Dunnett family with the team-reward group as control; the candidate is
// non-inferior when it is not significantly below the team group.
NonInferiority TestNonInferior(const std::vector<GroupSample>& samples,
                               int reference, double candidate_label,
                               double alpha, const DunnettOptions& options) {
  NonInferiority out;
  const Summary sum = Summarize(samples);
  out.reference_s = samples[reference].label;
  for (const auto& g : sum.groups) {
    if (g.label == out.reference_s) out.reference_mean = g.mean;
    if (g.label == candidate_label) out.candidate_mean = g.mean;
  }
  if (out.reference_s == candidate_label) return out;
  std::vector<GroupSample> treatments;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    if (i != reference) treatments.push_back(samples[i]);
  }
  const DunnettResult r =
      DunnettOneSided(samples[reference], treatments, alpha, options);
  const TreatmentResult* t = r.Find(candidate_label);
  out.p = t->p;
  out.non_inferior = !t->significant;
  return out;
}

}  // namespace

bool BoundCheck(double s, int n) {
  if (n < 1 || !std::isfinite(s)) return false;
  constexpr double kSlack = 1e-12;
  return s >= 1.0 / n - kSlack && s <= 1.0 + kSlack;
}

EstimatorConfig ResolveConfig(const EstimatorConfig& config) {
  EstimatorConfig c = config;
  if (c.environment.id.empty()) {
    throw std::invalid_argument("environment.id is required");
  }
  const int n = ResolvedPlayerCount(c.environment);
  c.environment.num_players = n;
  ValidateLearnerConfig(c.learner);
  if (c.pretrain_counts.empty()) {
    if (FixedArity(c.environment.id)) {
      c.pretrain_counts = {n};
    } else {
      for (int k = 1; k <= n; ++k) c.pretrain_counts.push_back(k);
    }
  }
  if (c.pretrain_counts.back() != n) {
    throw std::invalid_argument(
        "schedule.player_counts must end at the environment's player count");
  }
  if (c.s_values.empty()) {
    c.s_values.push_back(1.0);
    if (n >= 2) {
      for (const auto& s : DefaultSchedule(n)) c.s_values.push_back(s.value());
    }
  }
  std::sort(c.s_values.begin(), c.s_values.end(), std::greater<>());
  if (c.s_values.front() != 1.0) {
    throw std::invalid_argument("schedule.s_values must include 1");
  }
  for (std::size_t i = 0; i < c.s_values.size(); ++i) {
    if (!BoundCheck(c.s_values[i], n)) {
      throw std::invalid_argument("schedule.s_values: " +
                                  std::to_string(c.s_values[i]) +
                                  " outside [1/n, 1]");
    }
    if (i > 0 && c.s_values[i] == c.s_values[i - 1]) {
      throw std::invalid_argument("schedule.s_values has duplicates");
    }
  }
  if (c.pretrain_episodes < 1) {
    throw std::invalid_argument("schedule.pretrain_episodes must be >= 1");
  }
  if (c.episodes_per_stage < 1) {
    throw std::invalid_argument("schedule.episodes_per_stage must be >= 1");
  }
  if (c.validation_episodes < 1) {
    throw std::invalid_argument("validation_episodes must be >= 1");
  }
  if (c.seeds.size() < 2) {
    throw std::invalid_argument(
        "seeds: at least two are needed to estimate welfare variance");
  }
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() !=
      c.seeds.size()) {
    throw std::invalid_argument("seeds must be distinct");
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (!(c.final_window_fraction > 0.0 && c.final_window_fraction <= 1.0)) {
    throw std::invalid_argument("final_window_fraction must lie in (0, 1]");
  }
  if (c.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (c.dunnett.draws < 1) throw std::invalid_argument("dunnett draws < 1");
  // Fail early on game construction problems.
  MakeGameFamily(c.environment)(n);
  return c;
}

std::vector<StagePlan> PretrainPlans(const EstimatorConfig& c) {
  return CurriculumPlans(c.pretrain_counts, c.pretrain_episodes);
}

std::vector<StagePlan> EstimationPlans(const EstimatorConfig& c) {
  std::vector<StagePlan> plans = PretrainPlans(c);
  const std::vector<double> descent(c.s_values.begin() + 1, c.s_values.end());
  for (auto& p : DescentPlans(c.environment.num_players, descent,
                              c.episodes_per_stage)) {
    plans.push_back(std::move(p));
  }
  return plans;
}

std::vector<TrainingRun> RunSeeds(const EstimatorConfig& c,
                                  const std::vector<StagePlan>& plans,
                                  StageStore* store, std::uint64_t stream) {
  const GameFactory factory = MakeGameFamily(c.environment);
  RunOptions options;
  options.final_window_fraction = c.final_window_fraction;
  options.collapse_ratio = c.collapse_ratio;
  options.stream = stream;
  std::vector<TrainingRun> runs(c.seeds.size());
  std::vector<std::exception_ptr> errors(c.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c.seeds.size(); i = next++) {
      try {
        runs[i] = RunStages(factory, plans, c.learner, c.seeds[i], store, {},
                            options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::min<int>(c.jobs, static_cast<int>(c.seeds.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

EstimationReport BuildReport(const EstimatorConfig& c,
                             const std::vector<StagePlan>& plans,
                             const std::vector<TrainingRun>& runs) {
  EstimationReport r;
  r.game = c.environment.id;
  r.num_players = c.environment.num_players;
  r.schedule = c.s_values;
  r.seeds = c.seeds;
  r.alpha = c.alpha;
  const int pretrain_last = static_cast<int>(c.pretrain_counts.size()) - 1;
  r.samples.push_back(SampleForStage(runs, pretrain_last, 1.0));
  for (int k = pretrain_last + 1; k < static_cast<int>(plans.size()); ++k) {
    r.samples.push_back(SampleForStage(runs, k, plans[k].s));
  }
  for (int k = 0; k < static_cast<int>(plans.size()); ++k) {
    r.stage_labels.push_back(plans[k].label);
    std::vector<bool> flags;
    for (const auto& run : runs) flags.push_back(run.stages.at(k).collapsed);
    r.collapsed.push_back(std::move(flags));
  }
  if (r.samples.size() < 2) {
    // Only the selfish group: nothing to compare against, so s* = 1.
    Selection& sel = r.selection;
    sel.summary = Summarize(r.samples);
    sel.dunnett.control_label = 1.0;
    sel.dunnett.alpha = c.alpha;
    sel.dunnett.draws = c.dunnett.draws;
    sel.s_star = sel.interval_lo = sel.interval_hi = 1.0;
    sel.hi_closed = true;
    r.team_reference.reference_s = 1.0;
    r.team_reference.reference_mean = sel.summary.groups[0].mean;
    r.team_reference.candidate_mean = sel.summary.groups[0].mean;
    return r;
  }
  r.selection = SelectSelfInterestLevel(r.samples, c.alpha, c.dunnett);

  const int team_index = static_cast<int>(r.samples.size()) - 1;
  const GroupSample& team = r.samples[team_index];  // smallest s
  r.team_reference = TestNonInferior(r.samples, team_index,
                                     r.selection.s_star, c.alpha, c.dunnett);

  // Audit: one-sided test of the team group below each higher-s group, with
  // the variance pooled over the whole schedule.
  for (int k = 0; k < team_index; ++k) {
    const GroupSample treatments[] = {team};
    std::vector<GroupSample> rest;
    for (int i = 0; i < team_index; ++i) {
      if (i != k) rest.push_back(r.samples[i]);
    }
    const DunnettResult d = DunnettOneSided(r.samples[k], treatments, c.alpha,
                                            c.dunnett, rest);
    if (d.treatments[0].significant) {
      r.audit_violations.push_back({r.samples[k].label, d.treatments[0].p});
    }
  }
  return r;
}

EstimationReport EstimateMarkov(const EstimatorConfig& config,
                                StageStore* store,
                                std::vector<TrainingRun>* runs_out) {
  const auto start = std::chrono::steady_clock::now();
  const EstimatorConfig c = ResolveConfig(config);
  const auto plans = EstimationPlans(c);
  std::vector<TrainingRun> runs = RunSeeds(c, plans, store, kEstimateStream);
  EstimationReport report = BuildReport(c, plans, runs);
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  if (runs_out) *runs_out = std::move(runs);
  return report;
}

json EstimationReportToJson(const EstimationReport& r) {
  json samples = json::array();
  for (const auto& g : r.samples) {
    samples.push_back({{"s", g.label}, {"values", g.values}});
  }
  json violations = json::array();
  for (const auto& v : r.audit_violations) {
    violations.push_back({{"higher_s", v.higher_s}, {"p", v.p}});
  }
  json collapse = json::array();
  for (std::size_t k = 0; k < r.stage_labels.size(); ++k) {
    json seeds = json::array();
    for (std::size_t i = 0; i < r.collapsed[k].size(); ++i) {
      if (r.collapsed[k][i]) seeds.push_back(r.seeds[i]);
    }
    collapse.push_back({{"stage", r.stage_labels[k]},
                        {"collapsed_seeds", seeds}});
  }
  return {{"game", r.game},
          {"num_players", r.num_players},
          {"schedule", r.schedule},
          {"seeds", r.seeds},
          {"seed_count", r.seeds.size()},
          {"alpha", r.alpha},
          {"samples", samples},
          {"selection", SelectionToJson(r.selection)},
          {"s_star", r.selection.s_star},
          {"bracket", FormatInterval(r.selection)},
          {"team_reference",
           {{"s", r.team_reference.reference_s},
            {"mean", r.team_reference.reference_mean},
            {"s_star_mean", r.team_reference.candidate_mean},
            {"p", r.team_reference.p},
            {"non_inferior", r.team_reference.non_inferior}}},
          {"monotonicity_audit",
           {{"passed", r.audit_violations.empty()},
            {"violations", violations}}},
          {"instability", collapse}};
}

EstimationReport EstimationReportFromJson(const json& j) {
  EstimationReport r;
  r.game = j.at("game").get<std::string>();
  r.num_players = j.at("num_players").get<int>();
  r.schedule = j.at("schedule").get<std::vector<double>>();
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  r.alpha = j.at("alpha").get<double>();
  for (const auto& g : j.at("samples")) {
    r.samples.push_back(GroupSample{g.at("s").get<double>(),
                                    g.at("values").get<std::vector<double>>()});
  }
  const json& sel = j.at("selection");
  r.selection.s_star = sel.at("s_star").get<double>();
  r.selection.interval_lo = sel.at("interval").at("lo").get<double>();
  r.selection.interval_hi = sel.at("interval").at("hi").get<double>();
  r.selection.hi_closed = sel.at("interval").at("hi_closed").get<bool>();
  return r;
}

ValidationReport ValidateWithoutCurriculum(const EstimatorConfig& config,
                                           const EstimationReport& prior,
                                           const ArmStoreProvider& stores) {
  const EstimatorConfig c = ResolveConfig(config);
  const int n = c.environment.num_players;
  if (prior.game != c.environment.id || prior.num_players != n) {
    throw std::invalid_argument(
        "prior report was produced for a different environment");
  }
  const double s_plus = prior.selection.interval_hi;
  const std::vector<std::pair<std::string, double>> arms = {
      {"selfish", 1.0},
      {"s_star", prior.selection.s_star},
      {"s_plus", s_plus},
      {"team", 1.0 / n}};

  ValidationReport out;
  out.episodes = c.validation_episodes;
  for (int a = 0; a < static_cast<int>(arms.size()); ++a) {
    const auto& [name, s] = arms[a];
    std::vector<StagePlan> plans;
    // Start from single-player policies where the game admits one player.
    if (!FixedArity(c.environment.id) && n > 1) {
      plans.push_back(StagePlan{"pretrain_n1", 1, 1.0, c.pretrain_episodes,
                                true});
    }
    plans.push_back(StagePlan{"validate_" + name, n,
                              n >= 2 ? SelfInterest(s, n).value() : 1.0,
                              c.validation_episodes, false});
    StageStore* store = stores ? stores(a) : nullptr;
    const auto runs = RunSeeds(c, plans, store, kValidationStream);
    ValidationArm arm;
    arm.name = name;
    arm.s = s;
    arm.final.label = s;
    for (const auto& run : runs) {
      arm.trajectories.push_back(run.stages.back().welfare);
      arm.final.values.push_back(run.stages.back().final_window_mean);
    }
    out.arms.push_back(std::move(arm));
  }

  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < static_cast<int>(out.arms.size()); ++a) {
    const auto& v = out.arms[a].final.values;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    if (mean > best) {
      best = mean;
      out.control_arm = a;
    }
  }
  if (c.seeds.size() >= 2) {
    std::vector<GroupSample> treatments;
    for (int a = 0; a < static_cast<int>(out.arms.size()); ++a) {
      if (a != out.control_arm) treatments.push_back(out.arms[a].final);
    }
    out.dunnett = DunnettOneSided(out.arms[out.control_arm].final, treatments,
                                  c.alpha, c.dunnett);
  }
  return out;
}

json ValidationReportToJson(const ValidationReport& r) {
  json arms = json::array();
  int t = 0;
  for (int a = 0; a < static_cast<int>(r.arms.size()); ++a) {
    const auto& arm = r.arms[a];
    json row{{"arm", arm.name},
             {"s", arm.s},
             {"final_welfare", arm.final.values},
             {"control", a == r.control_arm}};
    if (a != r.control_arm && t < static_cast<int>(r.dunnett.treatments.size())) {
      row["p"] = r.dunnett.treatments[t].p;
      row["significant"] = r.dunnett.treatments[t].significant;
      ++t;
    }
    arms.push_back(std::move(row));
  }
  return {{"episodes_per_arm", r.episodes},
          {"arms", arms},
          {"alpha", r.dunnett.alpha}};
}

}  // namespace dilemma_lab
