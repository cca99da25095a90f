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

#ifndef DPSYNTH_MECHANISMS_HPP_
#define DPSYNTH_MECHANISMS_HPP_

#include <cstddef>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

// Noise scale of the Gaussian mechanism under rho-zCDP:
//   sigma = sensitivity * sqrt(1 / (2 * rho)).
double gaussian_sigma(double sensitivity, double rho);

// Adds iid N(0, sigma^2) noise with sigma = gaussian_sigma(sensitivity,
// rho) to every entry. The caller must already have charged rho to an
// accountant; this function only consumes randomness.
std::vector<double> gaussian_mechanism(const std::vector<double>& values,
                                       double sensitivity, double rho,
                                       Rng& rng);

// Selection probabilities of the exponential mechanism at rho-zCDP, with
//   eps = sqrt(8 * rho),  P(i) proportional to exp(eps * score[i] /
//   (2 * sensitivity)).
// Scores may be any finite values; the computation subtracts the maximum
// before exponentiating.
std::vector<double> exponential_mechanism_probabilities(
    const std::vector<double>& scores, double sensitivity, double rho);

// Draws one index from the distribution above.
std::size_t exponential_mechanism(const std::vector<double>& scores,
                                  double sensitivity, double rho, Rng& rng);

}  // namespace dpsynth

#endif  // DPSYNTH_MECHANISMS_HPP_
