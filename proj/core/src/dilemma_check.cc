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

#include "dilemma_lab/dilemma_check.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "dilemma_lab/random.h"

namespace dilemma_lab {
namespace {

// Welford accumulator.
struct Moments {
  int n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void Add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double Se() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

struct Cell {
  Moments coop, defect, welfare;
};

Cell RunCell(const MarkovGame& game, const PolicySet& coop,
             const PolicySet& defect, int num_coop, int episodes,
             std::uint64_t seed) {
  const int n = game.num_players();
  Rng rng(seed);
  Cell cell;
  std::vector<int> slots(n);
  std::vector<const Policy*> policies(n);
  for (int e = 0; e < episodes; ++e) {
    std::iota(slots.begin(), slots.end(), 0);
    Shuffle(rng, slots);
    // The first num_coop shuffled slots cooperate.
    for (int r = 0; r < n; ++r) {
      const PolicySet& pool = r < num_coop ? coop : defect;
      const int pick = UniformInt(rng, static_cast<int>(pool.policies.size()));
      policies[slots[r]] = pool.policies[pick].get();
    }
    const EpisodeRewards out = Rollout(game, policies, rng);
    double c = 0.0, d = 0.0;
    for (int r = 0; r < n; ++r) {
      (r < num_coop ? c : d) += out.undiscounted_returns[slots[r]];
    }
    if (num_coop > 0) cell.coop.Add(c / num_coop);
    if (num_coop < n) cell.defect.Add(d / (n - num_coop));
    cell.welfare.Add(CollectiveReward(out));
  }
  return cell;
}

void CheckPool(const MarkovGame& game, const PolicySet& pool,
               const char* name) {
  if (pool.policies.empty()) {
    throw std::invalid_argument(std::string(name) + " pool is empty");
  }
  for (const auto& p : pool.policies) {
    if (!p) throw std::invalid_argument(std::string(name) + " pool has null");
  }
  (void)game;
}

// Shortest representation that round-trips.
std::string Num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

SchellingDiagram ComputeSchellingDiagram(const MarkovGame& game,
                                         const PolicySet& coop,
                                         const PolicySet& defect,
                                         int episodes_per_cell,
                                         std::uint64_t seed, int jobs) {
  if (!game.symmetric()) {
    throw UnsupportedConfiguration(
        "Schelling diagrams need a symmetric game; '" + game.id() +
        "' has asymmetric roles");
  }
  if (episodes_per_cell < 1) {
    throw std::invalid_argument("episodes_per_cell must be >= 1");
  }
  CheckPool(game, coop, "cooperate");
  CheckPool(game, defect, "defect");
  const int n = game.num_players();
  std::vector<Cell> cells(n + 1);
  auto run = [&](int m) {
    cells[m] = RunCell(game, coop, defect, m, episodes_per_cell,
                       DeriveSeed(seed, static_cast<std::uint64_t>(m)));
  };
  jobs = std::clamp(jobs, 1, n + 1);
  if (jobs == 1) {
    for (int m = 0; m <= n; ++m) run(m);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (int m = w; m <= n; m += jobs) run(m);
      });
    }
    for (auto& t : workers) t.join();
  }

  SchellingDiagram d;
  d.n = n;
  d.episodes_per_cell = episodes_per_cell;
  for (int k = 0; k < n; ++k) {
    d.coop_mean.push_back(cells[k + 1].coop.mean);
    d.coop_se.push_back(cells[k + 1].coop.Se());
    d.defect_mean.push_back(cells[k].defect.mean);
    d.defect_se.push_back(cells[k].defect.Se());
  }
  for (int m = 0; m <= n; ++m) {
    d.welfare.push_back(cells[m].welfare.mean);
    d.welfare_se.push_back(cells[m].welfare.Se());
  }
  return d;
}

std::string SchellingCsv(const SchellingDiagram& d) {
  std::ostringstream os;
  os << "# episodes_per_cell=" << d.episodes_per_cell << "\n";
  os << "# convention=payoff columns indexed by the number of other "
        "cooperators n_c; welfare indexed by the total number of "
        "cooperators n_c\n";
  os << "n_c,coop_mean,coop_se,defect_mean,defect_se,welfare,welfare_se\n";
  for (int k = 0; k <= d.n; ++k) {
    os << k << ',';
    if (k < d.n) {
      os << Num(d.coop_mean[k]) << ',' << Num(d.coop_se[k]) << ','
         << Num(d.defect_mean[k]) << ',' << Num(d.defect_se[k]) << ',';
    } else {
      os << ",,,,";
    }
    os << Num(d.welfare[k]) << ',' << Num(d.welfare_se[k]) << "\n";
  }
  return os.str();
}

DilemmaReport VerifyDilemma(const SchellingDiagram& d, double tolerance) {
  using nlohmann::json;
  DilemmaReport r;
  const int n = d.n;

  // 1. Welfare increases with every additional cooperator.
  r.condition1.holds = true;
  json steps = json::array();
  for (int m = 0; m < n; ++m) {
    const double diff = d.welfare[m + 1] - d.welfare[m];
    const double margin =
        tolerance * std::hypot(d.welfare_se[m], d.welfare_se[m + 1]);
    const bool up = diff > margin;
    steps.push_back({{"from", m}, {"to", m + 1}, {"difference", diff},
                     {"margin", margin}, {"increase", up}});
    if (!up) r.condition1.holds = false;
  }
  const int best = static_cast<int>(
      std::max_element(d.welfare.begin(), d.welfare.end()) -
      d.welfare.begin());
  r.condition1.evidence = {{"steps", steps},
                           {"welfare_argmax_n_c", best},
                           {"defectors_at_max", n - best},
                           {"tolerance_se", tolerance}};

  // 2. Defection is tempting against some profile of co-players.
  json tempting = json::array();
  for (int k = 0; k < n; ++k) {
    if (d.defect_mean[k] > d.coop_mean[k]) {
      tempting.push_back({{"other_cooperators", k},
                          {"defect", d.defect_mean[k]},
                          {"coop", d.coop_mean[k]}});
    }
  }
  r.condition2.holds = !tempting.empty();
  r.condition2.evidence = {
      {"tempting_profiles", tempting},
      {"scope", "co-player profiles drawn from the cooperate/defect pools"}};

  // 3. Mutual cooperation beats mutual defection per capita.
  const double all_c = d.coop_mean[n - 1];
  const double all_d = d.defect_mean[0];
  r.condition3.holds = all_c > all_d;
  r.condition3.evidence = {{"mutual_cooperation", all_c},
                           {"mutual_defection", all_d}};

  r.verdict = r.condition1.holds && r.condition2.holds && r.condition3.holds;
  return r;
}

nlohmann::json DiagramToJson(const SchellingDiagram& d) {
  return {{"n", d.n},
          {"episodes_per_cell", d.episodes_per_cell},
          {"coop_mean", d.coop_mean},
          {"coop_se", d.coop_se},
          {"defect_mean", d.defect_mean},
          {"defect_se", d.defect_se},
          {"welfare", d.welfare},
          {"welfare_se", d.welfare_se}};
}

nlohmann::json DilemmaReportToJson(const DilemmaReport& r) {
  auto cond = [](const ConditionResult& c) {
    return nlohmann::json{{"holds", c.holds}, {"evidence", c.evidence}};
  };
  return {{"condition1", cond(r.condition1)},
          {"condition2", cond(r.condition2)},
          {"condition3", cond(r.condition3)},
          {"verdict", r.verdict},
          {"is_dilemma", r.verdict}};
}

}  // namespace dilemma_lab
