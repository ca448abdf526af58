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

#include "dilemma_lab/random.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dilemma_lab {

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  return MixSeed(MixSeed(base) ^ MixSeed(stream + 0x632be59bd9b4e019ULL));
}

double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int UniformInt(Rng& rng, int n) {
  if (n <= 0) throw std::invalid_argument("UniformInt: n must be positive");
  const auto range = static_cast<std::uint64_t>(n);
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<int>(x % range);
}

bool Bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return Uniform01(rng) < p;
}

int Binomial(Rng& rng, int trials, double p) {
  int successes = 0;
  for (int i = 0; i < trials; ++i) successes += Bernoulli(rng, p) ? 1 : 0;
  return successes;
}

double StandardNormal(Rng& rng) {
  // Marsaglia polar method, discarding the second variate so that the
  // helper holds no hidden state.
  double u, v, s;
  do {
    u = 2.0 * Uniform01(rng) - 1.0;
    v = 2.0 * Uniform01(rng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double Gamma(Rng& rng, double shape) {
  if (shape <= 0.0) throw std::invalid_argument("Gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = Uniform01(rng);
    return Gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = StandardNormal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = Uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double ChiSquared(Rng& rng, double df) { return 2.0 * Gamma(rng, 0.5 * df); }

void Shuffle(Rng& rng, std::span<int> values) {
  for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
    const int j = UniformInt(rng, i + 1);
    std::swap(values[i], values[j]);
  }
}

std::string SerializeRng(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng DeserializeRng(const std::string& text) {
  std::istringstream in(text);
  Rng rng;
  in >> rng;
  if (!in) throw std::runtime_error("malformed RNG state");
  return rng;
}

}  // namespace dilemma_lab
