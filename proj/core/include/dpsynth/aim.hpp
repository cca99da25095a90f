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

#ifndef DPSYNTH_AIM_HPP_
#define DPSYNTH_AIM_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dpsynth/budget.hpp"
#include "dpsynth/model.hpp"
#include "dpsynth/schema.hpp"
#include "dpsynth/table.hpp"

namespace dpsynth {

// Knobs of the workload-adaptive synthesizer. Defaults follow the reference
// configuration; rounds_max = 0 means 4 * n_attributes.
struct SynthesizerOptions {
  double init_fraction = 0.1;    // budget share of the one-way warm start
  double select_fraction = 0.1;  // per-round share spent on selection
  std::size_t rounds_max = 0;
  std::size_t treewidth_cap = 3;
  std::size_t n_output = 0;      // 0 means match the input row count
  FitOptions fit;
};

// One adaptive round, for diagnostics and tests.
struct RoundLog {
  std::size_t round = 0;
  std::vector<std::size_t> chosen;  // attribute set measured this round
  double rho_spent = 0.0;
  double sigma = 0.0;      // Gaussian scale used for the measurement
  double epsilon = 0.0;    // exponential-mechanism parameter used to select
  double improvement = 0.0;
  bool annealed = false;
};

struct SynthesisResult {
  Table synthetic;
  GraphicalModel model;
  std::vector<RoundLog> rounds;
  double rho_charged = 0.0;
  std::vector<LedgerEntry> ledger;
};

// JSON array of per-round diagnostics (query attribute names resolved
// through `schema`), with a trailing newline.
std::string round_log_to_json(const std::vector<RoundLog>& rounds,
                              const Schema& schema);

// Generates a synthetic table under a total zCDP budget of `rho`.
//
// Warm start: init_fraction of rho measures every one-way marginal at equal
// shares. Each adaptive round then charges
//   rho_t = max(remaining / rounds_left, round cost implied by the current
//               noise scale),
// splits it select_fraction / (1 - select_fraction) between choosing a
// workload query (exponential mechanism over quality scores
//   q(c) = ||real marginal - model marginal||_1 - sqrt(2/pi) * sigma_t *
//          cells(c),
// sensitivity 1) and measuring the chosen marginal (Gaussian mechanism,
// sensitivity 1). Candidates that would push the model past treewidth_cap
// or the dense-cell cap are filtered out before selection. When a
// measurement moves the model by less than its expected noise the noise
// scale halves for subsequent rounds. The loop stops when the budget is
// exhausted or rounds_max is hit; all randomness flows from `seed` through
// the accountant's per-entry streams.
SynthesisResult synthesize(const Table& real, const Workload& workload,
                           double rho, std::uint64_t seed,
                           const SynthesizerOptions& options = {});

}  // namespace dpsynth

#endif  // DPSYNTH_AIM_HPP_
