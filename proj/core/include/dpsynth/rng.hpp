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

#ifndef DPSYNTH_RNG_HPP_
#define DPSYNTH_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace dpsynth {

// Deterministic seed mixing (splitmix64 finalizer). Used everywhere a child
// seed is derived from (root seed, index) so independent pipeline cells and
// mechanism calls never share a stream.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t index);

// Seeded random source. All transforms (uniform, normal, bounded integers,
// categorical draws) are implemented here explicitly so output streams are
// identical across platforms and compiler versions; std::distribution
// adapters are deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform();

  // Uniform double in (0, 1]; safe as a log() argument.
  double uniform_open();

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Index drawn with probability weights[i] / sum(weights). Non-negative
  // weights; an all-zero vector falls back to a uniform choice.
  std::size_t categorical(const std::vector<double>& weights);

  // Independent stream derived from this source's seed and an index.
  Rng child(std::uint64_t index) const { return Rng(mix_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dpsynth

#endif  // DPSYNTH_RNG_HPP_
