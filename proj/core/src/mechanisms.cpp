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

#include "dpsynth/mechanisms.hpp"

#include <algorithm>
#include <cmath>

#include "dpsynth/error.hpp"

namespace dpsynth {

double gaussian_sigma(double sensitivity, double rho) {
  if (!(sensitivity > 0.0)) throw ArgumentError("sensitivity must be > 0");
  if (!(rho > 0.0)) throw ArgumentError("rho must be > 0");
  return sensitivity * std::sqrt(1.0 / (2.0 * rho));
}

std::vector<double> gaussian_mechanism(const std::vector<double>& values,
                                       double sensitivity, double rho,
                                       Rng& rng) {
  const double sigma = gaussian_sigma(sensitivity, rho);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] + sigma * rng.normal();
  }
  return out;
}

std::vector<double> exponential_mechanism_probabilities(
    const std::vector<double>& scores, double sensitivity, double rho) {
  if (scores.empty()) throw ArgumentError("exponential mechanism: no scores");
  if (!(sensitivity > 0.0)) throw ArgumentError("sensitivity must be > 0");
  if (!(rho > 0.0)) throw ArgumentError("rho must be > 0");
  const double eps = std::sqrt(8.0 * rho);
  const double base = *std::max_element(scores.begin(), scores.end());
  if (!std::isfinite(base))
    throw ArgumentError("exponential mechanism: scores must be finite");

  std::vector<double> probabilities(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i]))
      throw ArgumentError("exponential mechanism: scores must be finite");
    probabilities[i] = std::exp(eps * (scores[i] - base) / (2.0 * sensitivity));
    total += probabilities[i];
  }
  for (double& p : probabilities) p /= total;
  return probabilities;
}

std::size_t exponential_mechanism(const std::vector<double>& scores,
                                  double sensitivity, double rho, Rng& rng) {
  const auto probabilities =
      exponential_mechanism_probabilities(scores, sensitivity, rho);
  return rng.categorical(probabilities);
}

}  // namespace dpsynth
