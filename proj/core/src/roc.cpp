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

#include "dpsynth/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "dpsynth/csv.hpp"
#include "dpsynth/error.hpp"

namespace dpsynth {

RocCurve roc_curve(const std::vector<double>& scores_in,
                   const std::vector<double>& scores_out) {
  if (scores_in.empty() || scores_out.empty())
    throw ArgumentError("roc_curve needs scores on both sides");
  // Infinite scores would collide with the sentinel thresholds below.
  for (const double s : scores_in)
    if (!std::isfinite(s)) throw ArgumentError("roc_curve: non-finite score");
  for (const double s : scores_out)
    if (!std::isfinite(s)) throw ArgumentError("roc_curve: non-finite score");

  std::set<double> thresholds(scores_in.begin(), scores_in.end());
  thresholds.insert(scores_out.begin(), scores_out.end());
  thresholds.insert(-std::numeric_limits<double>::infinity());
  thresholds.insert(std::numeric_limits<double>::infinity());

  // Sorted copies turn each "count of scores <= t" into an upper_bound.
  std::vector<double> in_sorted = scores_in;
  std::vector<double> out_sorted = scores_out;
  std::sort(in_sorted.begin(), in_sorted.end());
  std::sort(out_sorted.begin(), out_sorted.end());
  const auto n_in = static_cast<double>(in_sorted.size());
  const auto n_out = static_cast<double>(out_sorted.size());

  RocCurve curve;
  for (const double t : thresholds) {
    RocPoint point;
    point.threshold = t;
    point.tpr = static_cast<double>(std::upper_bound(in_sorted.begin(),
                                                     in_sorted.end(), t) -
                                    in_sorted.begin()) /
                n_in;
    point.fpr = static_cast<double>(std::upper_bound(out_sorted.begin(),
                                                     out_sorted.end(), t) -
                                    out_sorted.begin()) /
                n_out;
    curve.points.push_back(point);
  }

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  curve.auc = auc;
  return curve;
}

double youden_threshold(const RocCurve& curve) {
  if (curve.points.empty()) throw ArgumentError("empty ROC curve");
  double best = curve.points.front().threshold;
  double best_j = curve.points.front().tpr - curve.points.front().fpr;
  for (const RocPoint& point : curve.points) {
    const double j = point.tpr - point.fpr;
    if (j > best_j) {
      best_j = j;
      best = point.threshold;
    }
  }
  return best;
}

std::string roc_to_csv(const RocCurve& curve) {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  for (const RocPoint& point : curve.points) {
    out << format_double(point.threshold) << "," << format_double(point.fpr)
        << "," << format_double(point.tpr) << "\n";
  }
  return out.str();
}

}  // namespace dpsynth
