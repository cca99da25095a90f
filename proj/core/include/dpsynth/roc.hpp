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

#ifndef DPSYNTH_ROC_HPP_
#define DPSYNTH_ROC_HPP_

#include <string>
#include <vector>

namespace dpsynth {

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Receiver operating characteristic of a "low score means positive"
// classifier. Points are sorted by threshold (hence by fpr and tpr, both
// non-decreasing) and always include the -inf point (0, 0) and the +inf
// point (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Builds the curve by sweeping the decision rule "score <= threshold ->
// positive" over every distinct observed score plus the two infinite
// sentinels. scores_in are the positives (tpr), scores_out the negatives
// (fpr). auc is the trapezoidal integral over fpr, which equals the
// tie-corrected rank statistic P(in < out) + P(in = out)/2.
RocCurve roc_curve(const std::vector<double>& scores_in,
                   const std::vector<double>& scores_out);

// Threshold maximizing tpr - fpr (ties resolved to the lower threshold).
double youden_threshold(const RocCurve& curve);

// CSV with header "threshold,fpr,tpr", one line per point; infinite
// thresholds render as -inf / inf.
std::string roc_to_csv(const RocCurve& curve);

}  // namespace dpsynth

#endif  // DPSYNTH_ROC_HPP_
