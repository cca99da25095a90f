// Copyright 2026 The dpsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpsynth/rng.hpp"

#include <cmath>
#include <numbers>

#include "dpsynth/error.hpp"

namespace dpsynth {

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 finalizer over root advanced by the golden-ratio increment.
  std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // 53-bit mantissa; result in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  // (0, 1]: shift the half-open uniform by one ulp step of the grid.
  return 1.0 - uniform();
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw ArgumentError("uniform_index: n must be positive");
  // Rejection sampling over the multiples of n below 2^64.
  const std::uint64_t threshold = (0ULL - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
  if (weights.empty()) throw ArgumentError("categorical: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw ArgumentError("categorical: weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) return uniform_index(weights.size());
  const double target = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace dpsynth
