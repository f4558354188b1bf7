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

#ifndef LDPFAIR_FAIRNESS_H_
#define LDPFAIR_FAIRNESS_H_

#include <cstdint>
#include <optional>
#include <span>

namespace ldpfair {

// Group-fairness metrics over binary predictions. The group vector marks the
// privileged members with 1 and the unprivileged with 0; both groups must be
// nonempty or every function throws std::invalid_argument.
//
// Positive-prediction rates r_g = Pr[pred = 1 | group = g]:
//   disparate impact        DI  = r_unpriv / r_priv
//   statistical parity diff SPD = r_priv - r_unpriv
// True-positive rates t_g = Pr[pred = 1 | label = 1, group = g]:
//   equal opportunity diff  EOD = t_priv - t_unpriv
// Per-group accuracies a_g:
//   overall accuracy diff   OAD = a_priv - a_unpriv
//
// DI is 1 when both rates are zero and undefined (nullopt) when only the
// privileged rate is zero. EOD is undefined when either group has no
// positive-label members.

std::optional<double> DisparateImpact(std::span<const uint8_t> pred,
                                      std::span<const uint8_t> group);

double StatisticalParityDifference(std::span<const uint8_t> pred,
                                   std::span<const uint8_t> group);

std::optional<double> EqualOpportunityDifference(
    std::span<const uint8_t> pred, std::span<const uint8_t> label,
    std::span<const uint8_t> group);

double OverallAccuracyDifference(std::span<const uint8_t> pred,
                                 std::span<const uint8_t> label,
                                 std::span<const uint8_t> group);

struct FairnessReport {
  std::optional<double> disparate_impact;
  double statistical_parity = 0.0;
  std::optional<double> equal_opportunity;
  double accuracy_difference = 0.0;
};

FairnessReport EvaluateFairness(std::span<const uint8_t> pred,
                                std::span<const uint8_t> label,
                                std::span<const uint8_t> group);

}  // namespace ldpfair

#endif  // LDPFAIR_FAIRNESS_H_
