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

#include "dpsynth/aim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpsynth/error.hpp"
#include "dpsynth/marginals.hpp"
#include "dpsynth/mechanisms.hpp"

namespace dpsynth {
namespace {

constexpr double kNoisePenalty = 0.7978845608028654;  // sqrt(2 / pi)

std::string attrs_label(const Schema& schema,
                        const std::vector<std::size_t>& attrs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out << ",";
    out << schema.at(attrs[i]).name;
  }
  return out.str();
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

}  // namespace

SynthesisResult synthesize(const Table& real, const Workload& workload,
                           double rho, std::uint64_t seed,
                           const SynthesizerOptions& options) {
  real.validate();
  if (real.n_rows() == 0) throw ArgumentError("cannot synthesize from 0 rows");
  workload.validate(real.schema.size());
  if (workload.queries.empty())
    throw ArgumentError("synthesis needs a non-empty workload");
  if (!(rho > 0)) throw ArgumentError("synthesis budget must be positive");
  if (!(options.init_fraction > 0 && options.init_fraction < 1))
    throw ArgumentError("init_fraction must be in (0, 1)");
  if (!(options.select_fraction > 0 && options.select_fraction < 1))
    throw ArgumentError("select_fraction must be in (0, 1)");
  for (const auto& attr : real.schema.attributes) {
    if (attr.total_codes() < 2)
      throw ArgumentError("attribute \"" + attr.name +
                          "\" has a single code; synthesis needs domains >= 2");
  }

  const Schema& schema = real.schema;
  const std::size_t d = schema.size();
  const auto n = static_cast<double>(real.n_rows());
  const std::size_t rounds_max =
      options.rounds_max != 0 ? options.rounds_max : 4 * d;

  PrivacyAccountant accountant(rho, seed);
  std::vector<Measurement> measurements;
  std::vector<std::vector<std::size_t>> measured_scopes;

  // Warm start: every one-way marginal at an equal slice of the init share.
  const double rho_init_each = rho * options.init_fraction / static_cast<double>(d);
  for (std::size_t a = 0; a < d; ++a) {
    double charged = 0.0;
    const std::size_t entry = accountant.charge(
        "init:" + schema.at(a).name, rho_init_each, &charged);
    Rng rng = accountant.rng_for(entry);
    Measurement m;
    m.attributes = {a};
    m.sigma = gaussian_sigma(1.0, charged);
    m.noisy_counts = gaussian_mechanism(compute_marginal(real, {a}).counts,
                                        1.0, charged, rng);
    measured_scopes.push_back(m.attributes);
    measurements.push_back(std::move(m));
  }
  GraphicalModel model = fit_model(schema, measurements, n, options.fit);

  SynthesisResult result;

  // Adaptive rounds. sigma_t tracks the current noise scale; each round
  // needs rho_implied to reproduce it after the select/measure split, and
  // never takes less than an even share of what is left.
  const double measure_share = 1.0 - options.select_fraction;
  double sigma_t =
      gaussian_sigma(1.0, measure_share * accountant.remaining() /
                              static_cast<double>(rounds_max));
  std::map<std::vector<std::size_t>, std::vector<double>> real_marginals;

  for (std::size_t round = 1; round <= rounds_max; ++round) {
    const double remaining = accountant.remaining();
    if (remaining <= rho * 1e-12) break;
    const auto rounds_left = static_cast<double>(rounds_max - round + 1);
    const double rho_implied =
        0.5 / (sigma_t * sigma_t) / measure_share;
    double rho_t = std::max(remaining / rounds_left, rho_implied);
    // Too little left for another full round afterwards: spend the rest now.
    if (remaining < 2.0 * rho_t) rho_t = remaining;
    const double rho_select = options.select_fraction * rho_t;
    const double rho_measure = rho_t - rho_select;

    // Structural filter: a candidate must stay dense-representable and keep
    // the (hypothetical) junction tree within the treewidth cap.
    std::vector<const WorkloadQuery*> candidates;
    for (const auto& query : workload.queries) {
      if (marginal_cells(schema, query.attributes) > kDenseCellCap) continue;
      auto scopes = measured_scopes;
      scopes.push_back(query.attributes);
      const JunctionTree tentative = build_junction_tree(d, scopes);
      if (tentative.max_clique_size() > options.treewidth_cap + 1) continue;
      bool fits = true;
      for (const auto& clique : tentative.cliques) {
        if (marginal_cells(schema, clique) > kDenseCellCap) {
          fits = false;
          break;
        }
      }
      if (fits) candidates.push_back(&query);
    }
    if (candidates.empty()) break;

    const double sigma_round = gaussian_sigma(1.0, rho_measure);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    bool scoring_failed = false;
    for (const auto* query : candidates) {
      auto [it, inserted] = real_marginals.try_emplace(query->attributes);
      if (inserted)
        it->second = compute_marginal(real, query->attributes).counts;
      std::vector<double> model_counts;
      try {
        model_counts = model.marginal(query->attributes).counts;
      } catch (const ModelError&) {
        scoring_failed = true;
        break;
      }
      const double cells = static_cast<double>(it->second.size());
      scores.push_back(l1_distance(it->second, model_counts) -
                       kNoisePenalty * sigma_round * cells);
    }
    if (scoring_failed) break;

    RoundLog log;
    log.round = round;
    try {
      double charged_select = 0.0;
      const std::size_t select_entry = accountant.charge(
          "select:round " + std::to_string(round), rho_select, &charged_select);
      Rng select_rng = accountant.rng_for(select_entry);
      const std::size_t winner =
          exponential_mechanism(scores, 1.0, charged_select, select_rng);
      const WorkloadQuery& chosen = *candidates[winner];

      double charged_measure = 0.0;
      const std::size_t measure_entry = accountant.charge(
          "measure:round " + std::to_string(round) + ":" +
              attrs_label(schema, chosen.attributes),
          rho_measure, &charged_measure);
      Rng measure_rng = accountant.rng_for(measure_entry);
      const double sigma_used = gaussian_sigma(1.0, charged_measure);

      Measurement m;
      m.attributes = chosen.attributes;
      m.sigma = sigma_used;
      m.noisy_counts = gaussian_mechanism(real_marginals[chosen.attributes],
                                          1.0, charged_measure, measure_rng);

      const std::vector<double> before = model.marginal(chosen.attributes).counts;
      measured_scopes.push_back(m.attributes);
      measurements.push_back(std::move(m));
      model = fit_model(schema, measurements, n, options.fit);
      const std::vector<double> after = model.marginal(chosen.attributes).counts;

      log.chosen = chosen.attributes;
      log.rho_spent = charged_select + charged_measure;
      log.sigma = sigma_used;
      log.epsilon = std::sqrt(8.0 * charged_select);
      log.improvement = l1_distance(before, after);
      const double expected_noise =
          kNoisePenalty * sigma_used * static_cast<double>(after.size());
      if (log.improvement < expected_noise) {
        log.annealed = true;
        sigma_t = sigma_used / 2.0;
      } else {
        sigma_t = sigma_used;
      }
    } catch (const BudgetExhaustedError&) {
      break;  // keep the model fitted so far and go sample
    }
    result.rounds.push_back(std::move(log));
  }

  const std::size_t n_output =
      options.n_output != 0 ? options.n_output : real.n_rows();
  // Sampling is post-processing: it draws from a reserved stream, never from
  // the ledger.
  Rng sample_rng(mix_seed(seed, std::numeric_limits<std::uint64_t>::max()));
  result.synthetic = model.sample(n_output, sample_rng);
  result.model = std::move(model);
  result.rho_charged = accountant.spent();
  result.ledger = accountant.entries();
  return result;
}

std::string round_log_to_json(const std::vector<RoundLog>& rounds,
                              const Schema& schema) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const RoundLog& r : rounds) {
    nlohmann::ordered_json query = nlohmann::ordered_json::array();
    for (const std::size_t a : r.chosen) query.push_back(schema.at(a).name);
    doc.push_back({{"round", r.round},
                   {"query", std::move(query)},
                   {"rho", r.rho_spent},
                   {"sigma", r.sigma},
                   {"epsilon", r.epsilon},
                   {"improvement", r.improvement},
                   {"annealed", r.annealed}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace dpsynth
