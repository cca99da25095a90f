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

#include "dpsynth/budget.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpsynth/error.hpp"

namespace dpsynth {

double rho_to_eps(double rho, double delta) {
  if (rho < 0 || !std::isfinite(rho))
    throw ArgumentError("rho must be finite and >= 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw ArgumentError("delta must be in (0, 1)");
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

double eps_delta_to_rho(double eps, double delta) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ArgumentError("epsilon must be finite and > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw ArgumentError("delta must be in (0, 1)");
  const double log_inv_delta = std::log(1.0 / delta);
  const double root = std::sqrt(log_inv_delta + eps) - std::sqrt(log_inv_delta);
  double rho = root * root;
  // The algebra makes rho + 2*sqrt(rho*L) = eps exactly, but rounding can
  // push the float result a few ulps past eps. Spending such a rho would
  // overstate the guarantee, so step down until the round-trip is covered.
  while (rho > 0 && rho_to_eps(rho, delta) > eps) {
    rho = std::nextafter(rho, 0.0);
  }
  return rho;
}

PrivacyAccountant::PrivacyAccountant(double rho_total, std::uint64_t root_seed)
    : total_(rho_total), spent_(0.0), root_seed_(root_seed) {
  if (!(rho_total >= 0.0) || !std::isfinite(rho_total))
    throw ArgumentError("total rho must be finite and >= 0");
}

std::size_t PrivacyAccountant::charge(const std::string& label, double rho,
                                      double* charged) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw ArgumentError("charge rho must be finite and >= 0");
  const double available = total_ - spent_;
  double actual = rho;
  if (rho > available) {
    // remaining/k schedules can overshoot by accumulated rounding dust;
    // treat anything within one part in 1e9 of the total as "the rest".
    const double slack = 1e-9 * std::max(total_, rho);
    if (rho - available > slack) {
      std::ostringstream msg;
      msg << "budget exhausted: requested rho " << rho << " with "
          << available << " of " << total_ << " remaining (label \"" << label
          << "\")";
      throw BudgetExhaustedError(msg.str());
    }
    actual = available;
  }
  spent_ += actual;
  entries_.push_back({label, actual});
  if (charged != nullptr) *charged = actual;
  return entries_.size() - 1;
}

std::string ledger_to_json(const std::vector<LedgerEntry>& entries) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  double cumulative = 0.0;
  for (const LedgerEntry& entry : entries) {
    cumulative += entry.rho;
    doc.push_back({{"label", entry.label},
                   {"rho", entry.rho},
                   {"cumulative", cumulative}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace dpsynth
