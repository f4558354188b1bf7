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

#ifndef LDPFAIR_BUDGET_H_
#define LDPFAIR_BUDGET_H_

#include <span>
#include <string>
#include <vector>

#include "ldpfair/schema.h"

namespace ldpfair {

enum class AllocationScheme { kUniform, kKBased };

std::string AllocationSchemeName(AllocationScheme scheme);
AllocationScheme ParseAllocationScheme(const std::string& name);

struct AttributeBudget {
  std::string attribute;
  double epsilon = 0.0;
};

// Per-attribute budgets summing to the global budget, so the joint release
// satisfies total_epsilon-LDP under sequential composition.
struct PrivacyAllocation {
  AllocationScheme scheme = AllocationScheme::kUniform;
  double total_epsilon = 0.0;
  std::vector<AttributeBudget> per_attribute;

  double EpsilonFor(const std::string& attribute) const;  // throws if absent
};

// epsilon_j = epsilon / d_s for every attribute.
PrivacyAllocation AllocateUniform(double epsilon,
                                  std::span<const CategoricalDomain> attrs);

// epsilon_j = epsilon * k_j / sum_i k_i: larger domains get more budget.
PrivacyAllocation AllocateKBased(double epsilon,
                                 std::span<const CategoricalDomain> attrs);

PrivacyAllocation Allocate(AllocationScheme scheme, double epsilon,
                           std::span<const CategoricalDomain> attrs);

}  // namespace ldpfair

#endif  // LDPFAIR_BUDGET_H_
