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

#ifndef DILEMMA_LAB_STATS_H_
#define DILEMMA_LAB_STATS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dilemma_lab {

// Welfare values (one per seed) observed at self-interest `label`.
struct GroupSample {
  double label = 0.0;
  std::vector<double> values;
};

struct GroupSummary {
  double label = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  int n = 0;
};

struct Summary {
  std::vector<GroupSummary> groups;  // sorted by decreasing label
  int s_max_index = 0;               // index into groups
  double s_max() const { return groups[s_max_index].label; }
};

// Throws std::domain_error if a group has fewer than two values or a
// non-finite value, std::invalid_argument for duplicate labels.
Summary Summarize(std::span<const GroupSample> samples);

struct DunnettOptions {
  int draws = 200000;
  std::uint64_t seed = 0x64756e6e657474ULL;
};

struct TreatmentResult {
  double label = 0.0;
  double t = 0.0;
  double p = 1.0;
  double half_width = 0.0;  // Monte Carlo uncertainty of p
  bool significant = false;
};

struct DunnettResult {
  double control_label = 0.0;
  double alpha = 0.1;
  double pooled_sd = 0.0;
  int df = 0;
  int draws = 0;
  // Set when the pooled variance is zero but means differ; such p-values
  // are reported as 0.
  bool degenerate_variance = false;
  std::vector<TreatmentResult> treatments;  // in input order

  const TreatmentResult* Find(double label) const;
};

// One-sided many-to-one comparison: H0 mu_t >= mu_c against H1 mu_t < mu_c
// for every treatment, with familywise control from the joint (multivariate
// t) null distribution of the statistics. All groups share one pooled
// variance. p-values are Monte Carlo estimates with a fixed seed.
// Groups in `variance_only` contribute to the pooled variance and degrees
// of freedom without being tested.
DunnettResult DunnettOneSided(const GroupSample& control,
                              std::span<const GroupSample> treatments,
                              double alpha = 0.1,
                              const DunnettOptions& options = {},
                              std::span<const GroupSample> variance_only = {});

// P(max_j T_j >= t_i) under the null for the given observed statistics,
// treatment and control sizes and pooled degrees of freedom. Draw streams
// are per component, so appending treatments leaves the draws of existing
// ones unchanged.
std::vector<double> AdjustedPValues(std::span<const double> t_statistics,
                                    std::span<const int> treatment_sizes,
                                    int control_size, int df,
                                    const DunnettOptions& options = {},
                                    std::vector<double>* half_widths = nullptr);

// Planned Monte Carlo half-width (4 binomial standard errors) for a p-value
// estimate from `draws` draws; at most 2 / sqrt(draws).
double MonteCarloHalfWidth(double p, int draws);

// Unadjusted one-sided pooled two-sample t-test of treatment < control,
// pooling only the two groups. Closed form.
double OneSidedTTestPValue(const GroupSample& control,
                           const GroupSample& treatment);

struct Selection {
  double s_star = 1.0;
  // [lo, hi): hi is the next larger tested s. When s* is the largest tested
  // value the bracket is closed at 1.
  double interval_lo = 1.0;
  double interval_hi = 1.0;
  bool hi_closed = true;
  Summary summary;
  DunnettResult dunnett;
};

// s* = largest s whose p >= alpha, or s_max when every treatment is
// significantly worse. Invariant to the order of `samples`. Needs >= 2
// groups.
Selection SelectSelfInterestLevel(std::span<const GroupSample> samples,
                                  double alpha = 0.1,
                                  const DunnettOptions& options = {});

std::string FormatInterval(const Selection& selection);
nlohmann::json SelectionToJson(const Selection& selection);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_STATS_H_
