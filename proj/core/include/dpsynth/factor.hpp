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

#ifndef DPSYNTH_FACTOR_HPP_
#define DPSYNTH_FACTOR_HPP_

#include <cstddef>
#include <vector>

namespace dpsynth {

// Dense non-negative function over an ordered set of attributes. Scope is
// strictly increasing; storage is row-major with the last scope attribute
// varying fastest, matching Marginal. Factors are the working currency of
// the junction-tree code: clique potentials, separator messages, and
// intermediate tables in variable elimination.
class Factor {
 public:
  Factor() = default;

  // Constant factor with the given value in every cell. `attributes` must be
  // strictly increasing and `sizes` parallel to it.
  Factor(std::vector<std::size_t> attributes, std::vector<std::size_t> sizes,
         double fill);

  // Takes ownership of an existing dense table.
  Factor(std::vector<std::size_t> attributes, std::vector<std::size_t> sizes,
         std::vector<double> values);

  const std::vector<std::size_t>& attributes() const { return attributes_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t n_cells() const { return values_.size(); }

  double sum() const;

  // Scales all cells so they sum to `target`; a zero factor is left as is.
  void rescale_to(double target);

  // Sums out every attribute not in `keep`. `keep` must be a subset of the
  // scope (any order); the result scope is sorted.
  Factor marginal(std::vector<std::size_t> keep) const;

  // General product over the union of both scopes.
  static Factor product(const Factor& a, const Factor& b);

  // In-place cellwise multiply by a factor whose scope is a subset of this
  // factor's scope (values broadcast over the missing attributes).
  void multiply_expand(const Factor& small);

  // In-place cellwise multiply by num/den, both with identical scope that is
  // a subset of this factor's scope. Cells where den == 0 use ratio 0; this
  // is the iterative-scaling update convention (a zero current marginal can
  // only occur where the potential mass is already zero).
  void multiply_ratio_expand(const Factor& num, const Factor& den);

  // Factor over scope \ `fixed_attrs` with the fixed attributes pinned to
  // `fixed_codes`. `fixed_attrs` must be a subset of the scope.
  Factor slice(const std::vector<std::size_t>& fixed_attrs,
               const std::vector<std::size_t>& fixed_codes) const;

 private:
  // Cell strides of `small`'s scope inside this factor's iteration order,
  // used by both expand ops.
  std::vector<std::size_t> expand_strides(const Factor& small) const;

  std::vector<std::size_t> attributes_;
  std::vector<std::size_t> sizes_;
  std::vector<double> values_;
};

}  // namespace dpsynth

#endif  // DPSYNTH_FACTOR_HPP_
