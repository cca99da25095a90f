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

#include "dpsynth/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dpsynth/error.hpp"

namespace dpsynth {
namespace {

std::vector<std::size_t> attr_sizes(const Schema& schema,
                                    const std::vector<std::size_t>& attrs) {
  std::vector<std::size_t> sizes;
  sizes.reserve(attrs.size());
  for (std::size_t a : attrs) sizes.push_back(schema.at(a).total_codes());
  return sizes;
}

void check_measurement(const Schema& schema, const Measurement& m) {
  if (m.attributes.empty())
    throw ArgumentError("measurement with empty attribute set");
  for (std::size_t i = 0; i < m.attributes.size(); ++i) {
    if (m.attributes[i] >= schema.size())
      throw ArgumentError("measurement attribute out of range");
    if (i > 0 && m.attributes[i - 1] >= m.attributes[i])
      throw ArgumentError("measurement attributes must be sorted unique");
  }
  if (!(m.sigma > 0))
    throw ArgumentError("measurement sigma must be positive");
  const std::size_t cells = marginal_cells(schema, m.attributes);
  if (cells > kDenseCellCap)
    throw ModelError("measurement exceeds the dense cell cap");
  if (m.noisy_counts.size() != cells)
    throw ArgumentError("measurement count vector has the wrong length");
}

// Inverse-variance pooling of repeated measurements of one marginal:
// weight 1/sigma^2 each, pooled sigma^-2 = sum of the weights.
Measurement merge_measurements(const std::vector<const Measurement*>& group) {
  Measurement merged;
  merged.attributes = group[0]->attributes;
  merged.noisy_counts.assign(group[0]->noisy_counts.size(), 0.0);
  double precision = 0.0;
  for (const Measurement* m : group) {
    const double w = 1.0 / (m->sigma * m->sigma);
    precision += w;
    for (std::size_t i = 0; i < merged.noisy_counts.size(); ++i)
      merged.noisy_counts[i] += w * m->noisy_counts[i];
  }
  for (double& c : merged.noisy_counts) c /= precision;
  merged.sigma = std::sqrt(1.0 / precision);
  return merged;
}

struct TourStep {
  // apply measurements of clique `at`, or pass a message along edge `edge`
  // from clique `from` to clique `to`.
  bool is_move = false;
  std::size_t at = 0;
  std::size_t from = 0, to = 0, edge = 0;
};

}  // namespace

Marginal GraphicalModel::marginal(std::vector<std::size_t> attrs) const {
  if (attrs.empty()) throw ArgumentError("marginal needs at least 1 attribute");
  std::sort(attrs.begin(), attrs.end());
  if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end())
    throw ArgumentError("marginal attributes must be distinct");
  if (marginal_cells(schema_, attrs) > kDenseCellCap)
    throw ModelError("model marginal exceeds the dense cell cap");

  Marginal out;
  out.attributes = attrs;
  out.sizes = attr_sizes(schema_, attrs);

  const std::size_t covering = tree_.find_covering_clique(attrs);
  if (covering != JunctionTree::npos) {
    out.counts = beliefs_[covering].marginal(attrs).values();
    return out;
  }

  // Out-of-clique query: variable elimination over the clique conditionals
  // of every tree component that touches the requested attributes.
  std::vector<std::size_t> component(tree_.cliques.size(),
                                     JunctionTree::npos);
  std::size_t n_components = 0;
  for (std::size_t c = 0; c < tree_.cliques.size(); ++c) {
    if (component[c] != JunctionTree::npos) continue;
    std::vector<std::size_t> stack = {c};
    component[c] = n_components;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e : tree_.adjacency[u]) {
        const auto& edge = tree_.edges[e];
        const std::size_t v = edge.u == u ? edge.v : edge.u;
        if (component[v] == JunctionTree::npos) {
          component[v] = n_components;
          stack.push_back(v);
        }
      }
    }
    ++n_components;
  }

  std::vector<bool> component_needed(n_components, false);
  for (std::size_t c = 0; c < tree_.cliques.size(); ++c) {
    for (std::size_t a : attrs) {
      if (std::binary_search(tree_.cliques[c].begin(), tree_.cliques[c].end(),
                             a))
        component_needed[component[c]] = true;
    }
  }

  // Probability-space factors: the component root belief scaled to mass 1,
  // every other clique as its conditional given the separator toward the
  // root.
  std::vector<Factor> factors;
  std::vector<bool> visited(tree_.cliques.size(), false);
  for (std::size_t root = 0; root < tree_.cliques.size(); ++root) {
    if (visited[root] || !component_needed[component[root]]) continue;
    Factor root_factor = beliefs_[root];
    root_factor.rescale_to(1.0);
    factors.push_back(std::move(root_factor));
    visited[root] = true;
    std::vector<std::size_t> stack = {root};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e : tree_.adjacency[u]) {
        const auto& edge = tree_.edges[e];
        const std::size_t v = edge.u == u ? edge.v : edge.u;
        if (visited[v]) continue;
        visited[v] = true;
        Factor conditional = beliefs_[v];
        const Factor ones(separators_[e].attributes(), separators_[e].sizes(),
                          1.0);
        conditional.multiply_ratio_expand(ones, separators_[e]);
        factors.push_back(std::move(conditional));
        stack.push_back(v);
      }
    }
  }

  // Eliminate every variable outside the query, cheapest first (smallest
  // combined table).
  std::vector<std::size_t> to_eliminate;
  {
    std::vector<bool> keep(schema_.size(), false);
    for (std::size_t a : attrs) keep[a] = true;
    std::vector<bool> present(schema_.size(), false);
    for (const auto& f : factors)
      for (std::size_t a : f.attributes()) present[a] = true;
    for (std::size_t a = 0; a < schema_.size(); ++a)
      if (present[a] && !keep[a]) to_eliminate.push_back(a);
  }

  while (!to_eliminate.empty()) {
    // Pick the variable whose joined factor is smallest.
    std::size_t best_var = 0;
    double best_cost = 0.0;
    bool have = false;
    for (std::size_t var : to_eliminate) {
      std::vector<std::size_t> scope;
      for (const auto& f : factors) {
        if (!std::binary_search(f.attributes().begin(), f.attributes().end(),
                                var))
          continue;
        scope.insert(scope.end(), f.attributes().begin(), f.attributes().end());
      }
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      double cost = 1.0;
      for (std::size_t a : scope)
        cost *= static_cast<double>(schema_.at(a).total_codes());
      if (!have || cost < best_cost) {
        best_var = var;
        best_cost = cost;
        have = true;
      }
    }

    std::vector<Factor> rest;
    Factor joined;
    bool first = true;
    for (auto& f : factors) {
      if (std::binary_search(f.attributes().begin(), f.attributes().end(),
                             best_var)) {
        joined = first ? std::move(f) : Factor::product(joined, f);
        first = false;
      } else {
        rest.push_back(std::move(f));
      }
    }
    std::vector<std::size_t> keep;
    for (std::size_t a : joined.attributes())
      if (a != best_var) keep.push_back(a);
    if (keep.empty()) {
      // Scalar remainder: fold its mass into any surviving factor later by
      // tracking it as a 0-ary factor is overkill; multiply into the first
      // remaining factor instead.
      const double mass = joined.sum();
      if (!rest.empty()) {
        for (double& v : rest[0].values()) v *= mass;
      }
    } else {
      rest.push_back(joined.marginal(keep));
    }
    factors = std::move(rest);
    to_eliminate.erase(
        std::remove(to_eliminate.begin(), to_eliminate.end(), best_var),
        to_eliminate.end());
  }

  Factor result({}, {}, std::vector<double>{1.0});
  for (const auto& f : factors) result = Factor::product(result, f);
  if (result.attributes() != attrs) {
    // Query attributes never touched by any factor cannot occur: the tree
    // covers every schema attribute.
    throw StructuralError("variable elimination lost query attributes");
  }
  out.counts = result.values();
  for (double& c : out.counts) c *= total_count_;
  return out;
}

Table GraphicalModel::sample(std::size_t n_rows, Rng& rng) const {
  Table out;
  out.schema = schema_;
  out.rows.reserve(n_rows);

  // Component roots in ascending clique order, for a stable draw order.
  std::vector<std::size_t> roots;
  std::vector<std::size_t> seen(tree_.cliques.size(), 0);
  for (std::size_t c = 0; c < tree_.cliques.size(); ++c) {
    if (seen[c]) continue;
    roots.push_back(c);
    std::vector<std::size_t> stack = {c};
    seen[c] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e : tree_.adjacency[u]) {
        const auto& edge = tree_.edges[e];
        const std::size_t v = edge.u == u ? edge.v : edge.u;
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }

  std::vector<std::size_t> row(schema_.size(), 0);
  std::vector<std::size_t> cell_codes;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t root : roots) {
      // Root clique: joint draw over its attributes.
      const Factor& root_belief = beliefs_[root];
      std::size_t cell = rng.categorical(root_belief.values());
      unflatten_index(root_belief.sizes(), cell, &cell_codes);
      for (std::size_t i = 0; i < root_belief.attributes().size(); ++i)
        row[root_belief.attributes()[i]] = cell_codes[i];

      // Children: conditional draws given the separator assignment.
      std::vector<bool> done(tree_.cliques.size(), false);
      done[root] = true;
      std::vector<std::size_t> stack = {root};
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t e : tree_.adjacency[u]) {
          const auto& edge = tree_.edges[e];
          const std::size_t v = edge.u == u ? edge.v : edge.u;
          if (done[v]) continue;
          done[v] = true;
          std::vector<std::size_t> sep_codes;
          sep_codes.reserve(edge.separator.size());
          for (std::size_t a : edge.separator) sep_codes.push_back(row[a]);
          const Factor conditional =
              beliefs_[v].slice(edge.separator, sep_codes);
          if (!conditional.attributes().empty()) {
            cell = rng.categorical(conditional.values());
            unflatten_index(conditional.sizes(), cell, &cell_codes);
            for (std::size_t i = 0; i < conditional.attributes().size(); ++i)
              row[conditional.attributes()[i]] = cell_codes[i];
          }
          stack.push_back(v);
        }
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

GraphicalModel fit_model(const Schema& schema,
                         const std::vector<Measurement>& measurements,
                         double total_count, const FitOptions& options) {
  schema.validate();
  if (!(total_count > 0))
    throw ArgumentError("model total count must be positive");
  for (const auto& m : measurements) check_measurement(schema, m);

  // Pool repeats, then clamp and renormalize each target: scaling targets
  // must be valid (non-negative, mass total_count) frequency tables.
  std::map<std::vector<std::size_t>, std::vector<const Measurement*>> groups;
  for (const auto& m : measurements) groups[m.attributes].push_back(&m);
  std::vector<Measurement> targets;
  std::vector<std::vector<std::size_t>> scopes;
  for (const auto& [attrs, group] : groups) {
    Measurement merged = merge_measurements(group);
    double mass = 0.0;
    for (double& c : merged.noisy_counts) {
      c = std::max(c, 0.0);
      mass += c;
    }
    if (mass > 0) {
      for (double& c : merged.noisy_counts) c *= total_count / mass;
    } else {
      // All-noise target: nothing to scale toward, keep it uniform.
      merged.noisy_counts.assign(merged.noisy_counts.size(),
                                 total_count /
                                     static_cast<double>(merged.noisy_counts.size()));
    }
    scopes.push_back(attrs);
    targets.push_back(std::move(merged));
  }

  GraphicalModel model;
  model.schema_ = schema;
  model.total_count_ = total_count;
  model.tree_ = build_junction_tree(schema.size(), scopes);
  const JunctionTree& tree = model.tree_;

  // Uniform start: every belief and separator carries mass total_count, so
  // the implicit joint (product of beliefs over product of separators) is
  // the uniform distribution at mass total_count.
  model.beliefs_.reserve(tree.cliques.size());
  for (const auto& clique : tree.cliques) {
    Factor belief(clique, attr_sizes(schema, clique), 1.0);
    belief.rescale_to(total_count);
    model.beliefs_.push_back(std::move(belief));
  }
  model.separators_.reserve(tree.edges.size());
  for (const auto& edge : tree.edges) {
    Factor sep(edge.separator, attr_sizes(schema, edge.separator), 1.0);
    sep.rescale_to(total_count);
    model.separators_.push_back(std::move(sep));
  }

  std::vector<std::vector<std::size_t>> clique_targets(tree.cliques.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::size_t c = tree.find_covering_clique(targets[t].attributes);
    if (c == JunctionTree::npos)
      throw StructuralError("measurement scope not covered by any clique");
    clique_targets[c].push_back(t);
  }

  // Depth-first tour of every component. Measurement updates happen when
  // the walk first reaches a clique; messages move with the walk, so the
  // focus clique's belief is always the true current marginal (single-focus
  // propagation). A plain distribute pass after the tour recalibrates the
  // whole tree.
  std::vector<TourStep> tour;
  std::vector<TourStep> distribute;
  {
    std::vector<bool> visited(tree.cliques.size(), false);
    for (std::size_t root = 0; root < tree.cliques.size(); ++root) {
      if (visited[root]) continue;
      struct StackEntry {
        std::size_t clique;
        std::size_t via_edge;
        std::size_t parent;
        bool entering;
      };
      std::vector<StackEntry> stack = {
          {root, JunctionTree::npos, JunctionTree::npos, true}};
      visited[root] = true;
      tour.push_back({false, root, 0, 0, 0});
      while (!stack.empty()) {
        auto [clique, via_edge, parent, entering] = stack.back();
        stack.pop_back();
        if (!entering) {
          tour.push_back({true, 0, clique, parent, via_edge});
          continue;
        }
        if (via_edge != JunctionTree::npos) {
          tour.push_back({true, 0, parent, clique, via_edge});
          tour.push_back({false, clique, 0, 0, 0});
          distribute.push_back({true, 0, parent, clique, via_edge});
          // Return move runs after the whole subtree.
          stack.push_back({clique, via_edge, parent, false});
        }
        for (std::size_t e : tree.adjacency[clique]) {
          const auto& edge = tree.edges[e];
          const std::size_t next = edge.u == clique ? edge.v : edge.u;
          if (visited[next]) continue;
          visited[next] = true;
          stack.push_back({next, e, clique, true});
        }
      }
    }
  }

  auto pass_message = [&](std::size_t from, std::size_t to, std::size_t e) {
    Factor new_sep = model.beliefs_[from].marginal(tree.edges[e].separator);
    model.beliefs_[to].multiply_ratio_expand(new_sep, model.separators_[e]);
    model.separators_[e] = std::move(new_sep);
  };

  bool converged = false;
  for (std::size_t sweep = 0; sweep < options.max_sweeps && !converged;
       ++sweep) {
    for (const auto& step : tour) {
      if (step.is_move) {
        pass_message(step.from, step.to, step.edge);
      } else {
        for (std::size_t t : clique_targets[step.at]) {
          const Factor target(targets[t].attributes,
                              attr_sizes(schema, targets[t].attributes),
                              targets[t].noisy_counts);
          const Factor current =
              model.beliefs_[step.at].marginal(targets[t].attributes);
          model.beliefs_[step.at].multiply_ratio_expand(target, current);
        }
      }
    }
    for (const auto& step : distribute) pass_message(step.from, step.to, step.edge);

    double worst = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const std::size_t c = tree.find_covering_clique(targets[t].attributes);
      const Factor fitted =
          model.beliefs_[c].marginal(targets[t].attributes);
      double l1 = 0.0;
      for (std::size_t i = 0; i < targets[t].noisy_counts.size(); ++i)
        l1 += std::abs(fitted.values()[i] - targets[t].noisy_counts[i]);
      worst = std::max(worst, l1);
    }
    converged = worst < options.tolerance * total_count;
  }
  return model;
}

}  // namespace dpsynth
