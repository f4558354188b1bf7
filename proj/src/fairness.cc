// Copyright 2026 The ldpfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldpfair/fairness.h"

#include <stdexcept>

namespace ldpfair {
namespace {

struct GroupCounts {
  size_t total[2] = {0, 0};       // members per group
  size_t predicted[2] = {0, 0};   // pred == 1
  size_t positives[2] = {0, 0};   // label == 1
  size_t true_pos[2] = {0, 0};    // pred == 1 and label == 1
  size_t correct[2] = {0, 0};     // pred == label
};

GroupCounts Count(std::span<const uint8_t> pred,
                  std::span<const uint8_t> label,
                  std::span<const uint8_t> group) {
  if (pred.size() != group.size() ||
      (!label.empty() && label.size() != group.size())) {
    throw std::invalid_argument("fairness input size mismatch");
  }
  if (group.empty()) throw std::invalid_argument("empty input");
  GroupCounts counts;
  for (size_t i = 0; i < group.size(); ++i) {
    int g = group[i] ? 1 : 0;
    ++counts.total[g];
    if (pred[i]) ++counts.predicted[g];
    if (!label.empty()) {
      if (label[i]) {
        ++counts.positives[g];
        if (pred[i]) ++counts.true_pos[g];
      }
      if ((pred[i] != 0) == (label[i] != 0)) ++counts.correct[g];
    }
  }
  if (counts.total[0] == 0 || counts.total[1] == 0) {
    throw std::invalid_argument("both groups must be nonempty");
  }
  return counts;
}

double Rate(size_t numerator, size_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

std::optional<double> DisparateImpact(std::span<const uint8_t> pred,
                                      std::span<const uint8_t> group) {
  GroupCounts c = Count(pred, {}, group);
  double unpriv = Rate(c.predicted[0], c.total[0]);
  double priv = Rate(c.predicted[1], c.total[1]);
  if (priv == 0.0) {
    if (unpriv == 0.0) return 1.0;  // neither group receives the outcome
    return std::nullopt;
  }
  return unpriv / priv;
}

double StatisticalParityDifference(std::span<const uint8_t> pred,
                                   std::span<const uint8_t> group) {
  GroupCounts c = Count(pred, {}, group);
  return Rate(c.predicted[1], c.total[1]) - Rate(c.predicted[0], c.total[0]);
}

std::optional<double> EqualOpportunityDifference(
    std::span<const uint8_t> pred, std::span<const uint8_t> label,
    std::span<const uint8_t> group) {
  GroupCounts c = Count(pred, label, group);
  if (c.positives[0] == 0 || c.positives[1] == 0) return std::nullopt;
  return Rate(c.true_pos[1], c.positives[1]) -
         Rate(c.true_pos[0], c.positives[0]);
}

double OverallAccuracyDifference(std::span<const uint8_t> pred,
                                 std::span<const uint8_t> label,
                                 std::span<const uint8_t> group) {
  GroupCounts c = Count(pred, label, group);
  return Rate(c.correct[1], c.total[1]) - Rate(c.correct[0], c.total[0]);
}

FairnessReport EvaluateFairness(std::span<const uint8_t> pred,
                                std::span<const uint8_t> label,
                                std::span<const uint8_t> group) {
  FairnessReport report;
  report.disparate_impact = DisparateImpact(pred, group);
  report.statistical_parity = StatisticalParityDifference(pred, group);
  report.equal_opportunity = EqualOpportunityDifference(pred, label, group);
  report.accuracy_difference = OverallAccuracyDifference(pred, label, group);
  return report;
}

}  // namespace ldpfair
