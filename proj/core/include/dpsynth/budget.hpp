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

#ifndef DPSYNTH_BUDGET_HPP_
#define DPSYNTH_BUDGET_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

// Conversions between (epsilon, delta) differential privacy and
// zero-concentrated differential privacy, for the add/remove-one-row
// neighboring relation.
//
// A rho-zCDP mechanism satisfies (eps, delta)-DP for every delta with
//   eps = rho + 2 * sqrt(rho * ln(1 / delta)).
// eps_delta_to_rho inverts that bound:
//   rho = (sqrt(ln(1/delta) + eps) - sqrt(ln(1/delta)))^2,
// then nudges the result down by a few ulps if needed so that converting
// back never reports an epsilon above the one requested. The conversion is
// conservative by construction: spending the returned rho is always covered
// by the (eps, delta) target.
double eps_delta_to_rho(double eps, double delta);
double rho_to_eps(double rho, double delta);

struct LedgerEntry {
  std::string label;
  double rho = 0.0;
};

// JSON array [{label, rho, cumulative}, ...] with a trailing newline, the
// audit artifact written next to every synthetic table.
std::string ledger_to_json(const std::vector<LedgerEntry>& entries);

// Central budget ledger. Every differentially private primitive charges the
// accountant before drawing any randomness, so a failed charge has no
// side effects and the ledger total is an upper bound on information
// released. Entry indices double as sub-stream identifiers: the randomness
// for entry i comes from mix_seed(root_seed, i), which makes a run
// reproducible from (root seed, charge order) alone.
class PrivacyAccountant {
 public:
  PrivacyAccountant(double rho_total, std::uint64_t root_seed);

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  std::uint64_t root_seed() const { return root_seed_; }

  // Records a charge and returns its entry index. A request that overshoots
  // the remaining budget by at most one part in 1e9 of the total (floating
  // point dust from repeated remaining/k splits) is clamped to the exact
  // remainder; anything larger throws BudgetExhaustedError and leaves the
  // ledger untouched. The rho actually charged is written back through
  // *charged so callers can size their noise from it.
  std::size_t charge(const std::string& label, double rho,
                     double* charged = nullptr);

  // Fresh random stream for ledger entry `index`.
  Rng rng_for(std::size_t index) const {
    return Rng(mix_seed(root_seed_, index));
  }

  const std::vector<LedgerEntry>& entries() const { return entries_; }

 private:
  double total_;
  double spent_;
  std::uint64_t root_seed_;
  std::vector<LedgerEntry> entries_;
};

}  // namespace dpsynth

#endif  // DPSYNTH_BUDGET_HPP_
