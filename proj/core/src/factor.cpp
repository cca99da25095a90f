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

#include "dpsynth/factor.hpp"

#include <algorithm>
#include <numeric>

#include "dpsynth/error.hpp"
#include "dpsynth/marginals.hpp"

namespace dpsynth {
namespace {

void check_scope(const std::vector<std::size_t>& attributes,
                 const std::vector<std::size_t>& sizes,
                 std::size_t n_values) {
  if (attributes.size() != sizes.size())
    throw ArgumentError("factor scope and sizes must be parallel");
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (i > 0 && attributes[i - 1] >= attributes[i])
      throw ArgumentError("factor scope must be strictly increasing");
    if (sizes[i] == 0) throw ArgumentError("factor dimension of size 0");
  }
  std::size_t cells = 1;
  for (std::size_t s : sizes) cells *= s;
  if (cells != n_values)
    throw ArgumentError("factor value count does not match its sizes");
}

std::size_t cell_count(const std::vector<std::size_t>& sizes) {
  std::size_t cells = 1;
  for (std::size_t s : sizes) cells *= s;
  return cells;
}

// Stride of each dimension in the factor's flat index (last varies fastest).
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> strides(sizes.size(), 1);
  for (std::size_t i = sizes.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * sizes[i];
  }
  return strides;
}

}  // namespace

Factor::Factor(std::vector<std::size_t> attributes,
               std::vector<std::size_t> sizes, double fill)
    : attributes_(std::move(attributes)), sizes_(std::move(sizes)) {
  values_.assign(cell_count(sizes_), fill);
  check_scope(attributes_, sizes_, values_.size());
}

Factor::Factor(std::vector<std::size_t> attributes,
               std::vector<std::size_t> sizes, std::vector<double> values)
    : attributes_(std::move(attributes)),
      sizes_(std::move(sizes)),
      values_(std::move(values)) {
  check_scope(attributes_, sizes_, values_.size());
}

double Factor::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void Factor::rescale_to(double target) {
  const double s = sum();
  if (s <= 0) return;
  const double f = target / s;
  for (double& v : values_) v *= f;
}

Factor Factor::marginal(std::vector<std::size_t> keep) const {
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> keep_sizes;
  // weight[i]: stride of this dimension in the output index, 0 if summed out
  std::vector<std::size_t> weight(attributes_.size(), 0);
  std::vector<std::size_t> keep_pos;
  for (std::size_t k : keep) {
    auto it = std::lower_bound(attributes_.begin(), attributes_.end(), k);
    if (it == attributes_.end() || *it != k)
      throw ArgumentError("marginal attribute not in factor scope");
    const auto pos = static_cast<std::size_t>(it - attributes_.begin());
    keep_pos.push_back(pos);
    keep_sizes.push_back(sizes_[pos]);
  }
  const auto out_strides = strides_of(keep_sizes);
  for (std::size_t i = 0; i < keep_pos.size(); ++i)
    weight[keep_pos[i]] = out_strides[i];

  Factor out(std::move(keep), std::move(keep_sizes), 0.0);
  const std::size_t k = sizes_.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t out_index = 0;
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    out.values_[out_index] += values_[flat];
    for (std::size_t i = k; i-- > 0;) {
      ++digits[i];
      out_index += weight[i];
      if (digits[i] < sizes_[i]) break;
      digits[i] = 0;
      out_index -= weight[i] * sizes_[i];
    }
  }
  return out;
}

Factor Factor::product(const Factor& a, const Factor& b) {
  // Union scope, sorted.
  std::vector<std::size_t> scope;
  std::vector<std::size_t> sizes;
  std::size_t ia = 0, ib = 0;
  while (ia < a.attributes_.size() || ib < b.attributes_.size()) {
    std::size_t next;
    if (ib == b.attributes_.size() ||
        (ia < a.attributes_.size() && a.attributes_[ia] < b.attributes_[ib])) {
      next = a.attributes_[ia];
      sizes.push_back(a.sizes_[ia]);
      ++ia;
    } else if (ia == a.attributes_.size() ||
               b.attributes_[ib] < a.attributes_[ia]) {
      next = b.attributes_[ib];
      sizes.push_back(b.sizes_[ib]);
      ++ib;
    } else {
      if (a.sizes_[ia] != b.sizes_[ib])
        throw ArgumentError("factor product: attribute size mismatch");
      next = a.attributes_[ia];
      sizes.push_back(a.sizes_[ia]);
      ++ia;
      ++ib;
    }
    scope.push_back(next);
  }
  if (cell_count(sizes) > kDenseCellCap)
    throw ModelError("factor product exceeds the dense cell cap");

  // weight of each union dimension in a's / b's flat index.
  auto weights_in = [&](const Factor& f) {
    std::vector<std::size_t> w(scope.size(), 0);
    const auto strides = strides_of(f.sizes_);
    for (std::size_t i = 0; i < f.attributes_.size(); ++i) {
      const auto it =
          std::lower_bound(scope.begin(), scope.end(), f.attributes_[i]);
      w[static_cast<std::size_t>(it - scope.begin())] = strides[i];
    }
    return w;
  };
  const auto wa = weights_in(a);
  const auto wb = weights_in(b);

  Factor out(std::move(scope), std::move(sizes), 0.0);
  const std::size_t k = out.sizes_.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t index_a = 0, index_b = 0;
  for (std::size_t flat = 0; flat < out.values_.size(); ++flat) {
    out.values_[flat] = a.values_[index_a] * b.values_[index_b];
    for (std::size_t i = k; i-- > 0;) {
      ++digits[i];
      index_a += wa[i];
      index_b += wb[i];
      if (digits[i] < out.sizes_[i]) break;
      digits[i] = 0;
      index_a -= wa[i] * out.sizes_[i];
      index_b -= wb[i] * out.sizes_[i];
    }
  }
  return out;
}

std::vector<std::size_t> Factor::expand_strides(const Factor& small) const {
  std::vector<std::size_t> weight(attributes_.size(), 0);
  const auto small_strides = strides_of(small.sizes_);
  for (std::size_t i = 0; i < small.attributes_.size(); ++i) {
    auto it = std::lower_bound(attributes_.begin(), attributes_.end(),
                               small.attributes_[i]);
    if (it == attributes_.end() || *it != small.attributes_[i])
      throw ArgumentError("factor scope is not a superset of the operand");
    const auto pos = static_cast<std::size_t>(it - attributes_.begin());
    if (sizes_[pos] != small.sizes_[i])
      throw ArgumentError("factor operand size mismatch");
    weight[pos] = small_strides[i];
  }
  return weight;
}

void Factor::multiply_expand(const Factor& small) {
  const auto weight = expand_strides(small);
  const std::size_t k = sizes_.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t small_index = 0;
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    values_[flat] *= small.values_[small_index];
    for (std::size_t i = k; i-- > 0;) {
      ++digits[i];
      small_index += weight[i];
      if (digits[i] < sizes_[i]) break;
      digits[i] = 0;
      small_index -= weight[i] * sizes_[i];
    }
  }
}

void Factor::multiply_ratio_expand(const Factor& num, const Factor& den) {
  if (num.attributes_ != den.attributes_)
    throw ArgumentError("ratio factors must share a scope");
  const auto weight = expand_strides(num);
  const std::size_t k = sizes_.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t small_index = 0;
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    const double d = den.values_[small_index];
    // d == 0 forces the cell to 0: the potential has no mass to move there.
    values_[flat] = d == 0.0 ? 0.0 : values_[flat] * num.values_[small_index] / d;
    for (std::size_t i = k; i-- > 0;) {
      ++digits[i];
      small_index += weight[i];
      if (digits[i] < sizes_[i]) break;
      digits[i] = 0;
      small_index -= weight[i] * sizes_[i];
    }
  }
}

Factor Factor::slice(const std::vector<std::size_t>& fixed_attrs,
                     const std::vector<std::size_t>& fixed_codes) const {
  if (fixed_attrs.size() != fixed_codes.size())
    throw ArgumentError("slice attributes and codes must be parallel");
  const auto strides = strides_of(sizes_);

  std::vector<bool> fixed(attributes_.size(), false);
  std::size_t base = 0;
  for (std::size_t i = 0; i < fixed_attrs.size(); ++i) {
    auto it = std::lower_bound(attributes_.begin(), attributes_.end(),
                               fixed_attrs[i]);
    if (it == attributes_.end() || *it != fixed_attrs[i])
      throw ArgumentError("slice attribute not in factor scope");
    const auto pos = static_cast<std::size_t>(it - attributes_.begin());
    if (fixed_codes[i] >= sizes_[pos])
      throw ArgumentError("slice code out of range");
    fixed[pos] = true;
    base += fixed_codes[i] * strides[pos];
  }

  std::vector<std::size_t> out_scope, out_sizes, src_stride;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (fixed[i]) continue;
    out_scope.push_back(attributes_[i]);
    out_sizes.push_back(sizes_[i]);
    src_stride.push_back(strides[i]);
  }

  Factor out(std::move(out_scope), std::move(out_sizes), 0.0);
  const std::size_t k = out.sizes_.size();
  std::vector<std::size_t> digits(k, 0);
  std::size_t src_index = base;
  for (std::size_t flat = 0; flat < out.values_.size(); ++flat) {
    out.values_[flat] = values_[src_index];
    for (std::size_t i = k; i-- > 0;) {
      ++digits[i];
      src_index += src_stride[i];
      if (digits[i] < out.sizes_[i]) break;
      digits[i] = 0;
      src_index -= src_stride[i] * out.sizes_[i];
    }
  }
  return out;
}

}  // namespace dpsynth
