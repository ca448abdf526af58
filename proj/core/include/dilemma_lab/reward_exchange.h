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

#ifndef DILEMMA_LAB_REWARD_EXCHANGE_H_
#define DILEMMA_LAB_REWARD_EXCHANGE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dilemma_lab {

// Fraction of its own reward a player retains under the exchange contract.
// The checked constructor enforces 1/n <= s <= 1; Unchecked admits any
// s in (0, 1] for exploratory sweeps below the lower bound.
class SelfInterest {
 public:
  SelfInterest(double s, int n);
  static SelfInterest Unchecked(double s, int n);
  static SelfInterest TeamReward(int n) { return SelfInterest(1.0 / n, n); }
  static SelfInterest Selfish(int n) { return SelfInterest(1.0, n); }

  double value() const { return s_; }
  int num_players() const { return n_; }

 private:
  struct UncheckedTag {};
  SelfInterest(double s, int n, UncheckedTag) : s_(s), n_(n) {}

  double s_;
  int n_;
};

// keep:give, the fraction of its own reward a player keeps relative to the
// share of one co-player's reward it receives.
struct ExchangeRatio {
  double keep = 1.0;
  double give = 1.0;

  // Parses "5:2". Throws std::invalid_argument for malformed input or
  // keep < give.
  static ExchangeRatio Parse(std::string_view text);
  std::string ToString() const;
};

// R'_i = s R_i + (1 - s) / (n - 1) * sum_{j != i} R_j. Throws
// std::domain_error for fewer than two players.
std::vector<double> Exchange(std::span<const double> rewards, SelfInterest s);
void ExchangeInPlace(std::span<double> rewards, SelfInterest s);

// s such that s : (1 - s)/(n - 1) = keep : give.
SelfInterest RatioToSelfInterest(ExchangeRatio ratio, int n);

// Ratios 20:1, 10:1, 5:1, 3:1, 5:2, 2:1, 5:3, 4:3, 1:1.
const std::vector<ExchangeRatio>& DefaultRatios();

// DefaultRatios() mapped to self-interest values for n players; strictly
// decreasing and ending at 1/n.
std::vector<SelfInterest> DefaultSchedule(int n);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_REWARD_EXCHANGE_H_
