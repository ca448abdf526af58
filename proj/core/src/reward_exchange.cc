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

#include "dilemma_lab/reward_exchange.h"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dilemma_lab {
namespace {

constexpr double kBoundSlack = 1e-12;

double ParseNumber(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::string FormatNumber(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

SelfInterest::SelfInterest(double s, int n) : s_(s), n_(n) {
  if (n < 1) throw std::invalid_argument("SelfInterest: n must be >= 1");
  if (!(s >= 1.0 / n - kBoundSlack && s <= 1.0 + kBoundSlack)) {
    throw std::invalid_argument("SelfInterest: s = " + FormatNumber(s) +
                                " outside [1/n, 1] for n = " +
                                std::to_string(n));
  }
}

SelfInterest SelfInterest::Unchecked(double s, int n) {
  if (n < 1) throw std::invalid_argument("SelfInterest: n must be >= 1");
  if (!(s > 0.0 && s <= 1.0 + kBoundSlack)) {
    throw std::invalid_argument("SelfInterest: s must lie in (0, 1]");
  }
  return SelfInterest(s, n, UncheckedTag{});
}

ExchangeRatio ExchangeRatio::Parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("ratio '" + std::string(text) +
                                "' is not of the form keep:give");
  }
  ExchangeRatio r{ParseNumber(text.substr(0, colon)),
                  ParseNumber(text.substr(colon + 1))};
  if (!(r.give > 0.0 && r.keep >= r.give)) {
    throw std::invalid_argument("ratio '" + std::string(text) +
                                "' must satisfy keep >= give > 0");
  }
  return r;
}

std::string ExchangeRatio::ToString() const {
  return FormatNumber(keep) + ":" + FormatNumber(give);
}

void ExchangeInPlace(std::span<double> rewards, SelfInterest s) {
  const auto n = static_cast<int>(rewards.size());
  if (n < 2) {
    throw std::domain_error("Exchange: need at least two players");
  }
  if (n != s.num_players()) {
    throw std::invalid_argument("Exchange: self-interest built for n = " +
                                std::to_string(s.num_players()) + ", got " +
                                std::to_string(n) + " rewards");
  }
  const double total = std::accumulate(rewards.begin(), rewards.end(), 0.0);
  const double keep = s.value();
  const double share = (1.0 - keep) / (n - 1);
  for (double& r : rewards) r = keep * r + share * (total - r);
}

std::vector<double> Exchange(std::span<const double> rewards, SelfInterest s) {
  std::vector<double> out(rewards.begin(), rewards.end());
  ExchangeInPlace(out, s);
  return out;
}

SelfInterest RatioToSelfInterest(ExchangeRatio ratio, int n) {
  if (n < 2) throw std::domain_error("RatioToSelfInterest: need n >= 2");
  return SelfInterest(ratio.keep / (ratio.keep + ratio.give * (n - 1)), n);
}

const std::vector<ExchangeRatio>& DefaultRatios() {
  static const std::vector<ExchangeRatio> kRatios{
      {20, 1}, {10, 1}, {5, 1}, {3, 1}, {5, 2}, {2, 1}, {5, 3}, {4, 3}, {1, 1}};
  return kRatios;
}

std::vector<SelfInterest> DefaultSchedule(int n) {
  std::vector<SelfInterest> schedule;
  for (const auto& r : DefaultRatios()) {
    schedule.push_back(RatioToSelfInterest(r, n));
  }
  return schedule;
}

}  // namespace dilemma_lab
