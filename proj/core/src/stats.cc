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

#include "dilemma_lab/stats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "dilemma_lab/random.h"

namespace dilemma_lab {
namespace {

GroupSummary SummarizeOne(const GroupSample& g) {
  if (g.values.size() < 2) {
    throw std::domain_error("group needs at least two values");
  }
  for (double v : g.values) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite sample value");
  }
  GroupSummary s;
  s.label = g.label;
  s.n = static_cast<int>(g.values.size());
  s.mean = std::accumulate(g.values.begin(), g.values.end(), 0.0) / s.n;
  double ss = 0.0;
  for (double v : g.values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (s.n - 1));
  return s;
}

double SumSquares(const GroupSample& g, double mean) {
  double ss = 0.0;
  for (double v : g.values) ss += (v - mean) * (v - mean);
  return ss;
}

std::vector<GroupSample> SortedByLabel(std::span<const GroupSample> samples) {
  std::vector<GroupSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.label > b.label; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].label == sorted[i - 1].label) {
      throw std::invalid_argument("duplicate group label");
    }
  }
  return sorted;
}

}  // namespace

Summary Summarize(std::span<const GroupSample> samples) {
  if (samples.empty()) throw std::domain_error("Summarize: no groups");
  Summary out;
  for (const auto& g : SortedByLabel(samples)) {
    out.groups.push_back(SummarizeOne(g));
  }
  // Strict comparison over decreasing labels: ties keep the larger s.
  for (int i = 1; i < static_cast<int>(out.groups.size()); ++i) {
    if (out.groups[i].mean > out.groups[out.s_max_index].mean) {
      out.s_max_index = i;
    }
  }
  return out;
}

const TreatmentResult* DunnettResult::Find(double label) const {
  for (const auto& t : treatments) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

double MonteCarloHalfWidth(double p, int draws) {
  // Shrink towards the interior so an estimate of exactly 0 or 1 still
  // carries a non-zero uncertainty.
  const double q = (p * draws + 2.0) / (draws + 4.0);
  return 4.0 * std::sqrt(q * (1.0 - q) / draws);
}

std::vector<double> AdjustedPValues(std::span<const double> t_statistics,
                                    std::span<const int> treatment_sizes,
                                    int control_size, int df,
                                    const DunnettOptions& options,
                                    std::vector<double>* half_widths) {
  const std::size_t k = t_statistics.size();
  if (k == 0 || treatment_sizes.size() != k) {
    throw std::invalid_argument("AdjustedPValues: size mismatch");
  }
  if (control_size < 1 || df < 1 || options.draws < 1) {
    throw std::invalid_argument("AdjustedPValues: bad sizes");
  }
  // Streams: 0 for the variance, 1 for the control, 2 + j for treatment j.
  Rng chi_rng(DeriveSeed(options.seed, 0));
  Rng control_rng(DeriveSeed(options.seed, 1));
  std::vector<Rng> treatment_rng;
  std::vector<double> sd(k), scale(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (treatment_sizes[j] < 1) throw std::invalid_argument("empty treatment");
    treatment_rng.emplace_back(DeriveSeed(options.seed, 2 + j));
    sd[j] = 1.0 / std::sqrt(treatment_sizes[j]);
    scale[j] = 1.0 / std::sqrt(1.0 / control_size + 1.0 / treatment_sizes[j]);
  }
  const double control_sd = 1.0 / std::sqrt(control_size);
  std::vector<long long> exceed(k, 0);
  for (int d = 0; d < options.draws; ++d) {
    const double s = std::sqrt(ChiSquared(chi_rng, df) / df);
    const double zc = control_sd * StandardNormal(control_rng);
    double max_t = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double zj = sd[j] * StandardNormal(treatment_rng[j]);
      max_t = std::max(max_t, (zc - zj) * scale[j] / s);
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (max_t >= t_statistics[j]) ++exceed[j];
    }
  }
  std::vector<double> p(k);
  if (half_widths) half_widths->assign(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    p[j] = static_cast<double>(exceed[j]) / options.draws;
    if (half_widths) (*half_widths)[j] = MonteCarloHalfWidth(p[j], options.draws);
  }
  return p;
}

DunnettResult DunnettOneSided(const GroupSample& control,
                              std::span<const GroupSample> treatments,
                              double alpha, const DunnettOptions& options,
                              std::span<const GroupSample> variance_only) {
  if (treatments.empty()) {
    throw std::invalid_argument("DunnettOneSided: need a treatment");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("DunnettOneSided: alpha outside (0, 1)");
  }
  const GroupSummary c = SummarizeOne(control);
  std::vector<GroupSummary> ts;
  double ss = SumSquares(control, c.mean);
  int df = c.n - 1;
  for (const auto& g : treatments) {
    ts.push_back(SummarizeOne(g));
    ss += SumSquares(g, ts.back().mean);
    df += ts.back().n - 1;
  }
  for (const auto& g : variance_only) {
    const GroupSummary v = SummarizeOne(g);
    ss += SumSquares(g, v.mean);
    df += v.n - 1;
  }
  DunnettResult out;
  out.control_label = control.label;
  out.alpha = alpha;
  out.df = df;
  out.draws = options.draws;
  out.pooled_sd = std::sqrt(ss / df);

  // Relative threshold: a pooled variance this small against the data scale
  // is rounding noise from identical values.
  double scale = std::abs(c.mean);
  for (const auto& t : ts) scale = std::max(scale, std::abs(t.mean));
  const bool zero_variance = out.pooled_sd <= 1e-12 * std::max(scale, 1.0);

  std::vector<double> stats;
  std::vector<int> sizes;
  for (const auto& t : ts) {
    TreatmentResult r;
    r.label = t.label;
    const double gap = c.mean - t.mean;
    if (zero_variance) {
      const bool worse = gap > 1e-12 * std::max(scale, 1.0);
      r.t = worse ? std::numeric_limits<double>::infinity() : 0.0;
      r.p = worse ? 0.0 : 1.0;
      if (worse) out.degenerate_variance = true;
    } else {
      r.t = gap / (out.pooled_sd * std::sqrt(1.0 / c.n + 1.0 / t.n));
    }
    stats.push_back(r.t);
    sizes.push_back(t.n);
    out.treatments.push_back(r);
  }
  if (!zero_variance) {
    std::vector<double> hw;
    const auto p = AdjustedPValues(stats, sizes, c.n, df, options, &hw);
    for (std::size_t j = 0; j < p.size(); ++j) {
      out.treatments[j].p = p[j];
      out.treatments[j].half_width = hw[j];
    }
  }
  for (auto& r : out.treatments) r.significant = r.p < alpha;
  return out;
}

double OneSidedTTestPValue(const GroupSample& control,
                           const GroupSample& treatment) {
  const GroupSummary c = SummarizeOne(control);
  const GroupSummary t = SummarizeOne(treatment);
  const int df = c.n + t.n - 2;
  const double sp = std::sqrt((SumSquares(control, c.mean) +
                               SumSquares(treatment, t.mean)) / df);
  const double gap = c.mean - t.mean;
  if (sp == 0.0) return gap > 0.0 ? 0.0 : 1.0;
  const double stat = gap / (sp * std::sqrt(1.0 / c.n + 1.0 / t.n));
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

Selection SelectSelfInterestLevel(std::span<const GroupSample> samples,
                                  double alpha,
                                  const DunnettOptions& options) {
  if (samples.size() < 2) {
    throw std::invalid_argument("SelectSelfInterestLevel: need >= 2 groups");
  }
  const std::vector<GroupSample> sorted = SortedByLabel(samples);
  Selection sel;
  sel.summary = Summarize(sorted);
  const int control = sel.summary.s_max_index;
  std::vector<GroupSample> treatments;
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    if (i != control) treatments.push_back(sorted[i]);
  }
  sel.dunnett = DunnettOneSided(sorted[control], treatments, alpha, options);
  sel.s_star = sorted[control].label;
  for (const auto& t : sel.dunnett.treatments) {
    if (!t.significant) sel.s_star = std::max(sel.s_star, t.label);
  }
  sel.interval_lo = sel.s_star;
  sel.interval_hi = 1.0;
  sel.hi_closed = true;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (it->label > sel.s_star) {
      sel.interval_hi = it->label;
      sel.hi_closed = false;
      break;
    }
  }
  return sel;
}

std::string FormatInterval(const Selection& sel) {
  auto fmt = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  return "[" + fmt(sel.interval_lo) + ", " + fmt(sel.interval_hi) +
         (sel.hi_closed ? "]" : ")");
}

nlohmann::json SelectionToJson(const Selection& sel) {
  using nlohmann::json;
  json groups = json::array();
  for (const auto& g : sel.summary.groups) {
    json row{{"s", g.label}, {"mean", g.mean}, {"sd", g.sd}, {"n", g.n}};
    if (const auto* t = sel.dunnett.Find(g.label)) {
      row["p"] = t->p;
      row["p_half_width"] = t->half_width;
      row["t"] = std::isfinite(t->t) ? json(t->t) : json("inf");
      row["significant"] = t->significant;
    } else {
      row["p"] = nullptr;
      row["significant"] = false;
    }
    groups.push_back(std::move(row));
  }
  return json{{"control", sel.dunnett.control_label},
              {"alpha", sel.dunnett.alpha},
              {"df", sel.dunnett.df},
              {"pooled_sd", sel.dunnett.pooled_sd},
              {"draws", sel.dunnett.draws},
              {"degenerate_variance", sel.dunnett.degenerate_variance},
              {"groups", std::move(groups)},
              {"s_star", sel.s_star},
              {"interval", {{"lo", sel.interval_lo},
                            {"hi", sel.interval_hi},
                            {"hi_closed", sel.hi_closed},
                            {"text", FormatInterval(sel)}}}};
}

}  // namespace dilemma_lab
