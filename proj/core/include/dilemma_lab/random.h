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

#ifndef DILEMMA_LAB_RANDOM_H_
#define DILEMMA_LAB_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>

namespace dilemma_lab {

// All randomness in the library flows through an explicitly passed Rng. The
// engine's output sequence is fixed by the standard; the sampling helpers
// below are written out by hand so that results do not depend on the
// standard library's distribution implementations.
using Rng = std::mt19937_64;

// SplitMix64 finaliser. Used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t x);

// Seed for stream `stream` of a run seeded with `base`.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

// Uniform double in [0, 1) with 53 random bits.
double Uniform01(Rng& rng);

// Uniform integer in [0, n). n must be positive.
int UniformInt(Rng& rng, int n);

bool Bernoulli(Rng& rng, double p);

// Number of successes in `trials` independent Bernoulli(p) draws.
int Binomial(Rng& rng, int trials, double p);

double StandardNormal(Rng& rng);

// Gamma(shape, 1) via Marsaglia-Tsang.
double Gamma(Rng& rng, double shape);

double ChiSquared(Rng& rng, double df);

// Fisher-Yates shuffle of `values` in place.
void Shuffle(Rng& rng, std::span<int> values);

std::string SerializeRng(const Rng& rng);
Rng DeserializeRng(const std::string& text);

}  // namespace dilemma_lab

#endif  // DILEMMA_LAB_RANDOM_H_
