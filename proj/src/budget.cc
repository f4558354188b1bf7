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

#include "ldpfair/budget.h"

#include <cmath>
#include <stdexcept>

namespace ldpfair {

namespace {

void CheckInputs(double epsilon, std::span<const CategoricalDomain> attrs) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
  if (attrs.empty()) {
    throw std::invalid_argument("allocation needs at least one attribute");
  }
  for (const auto& attr : attrs) {
    if (attr.size() < 2) {
      throw std::invalid_argument("attribute " + attr.name +
                                  " has domain size < 2");
    }
  }
}

}  // namespace

std::string AllocationSchemeName(AllocationScheme scheme) {
  switch (scheme) {
    case AllocationScheme::kUniform:
      return "uniform";
    case AllocationScheme::kKBased:
      return "k-based";
  }
  throw std::invalid_argument("unknown allocation scheme");
}

AllocationScheme ParseAllocationScheme(const std::string& name) {
  if (name == "uniform") {
    return AllocationScheme::kUniform;
  }
  if (name == "k-based") {
    return AllocationScheme::kKBased;
  }
  throw std::invalid_argument("unknown allocation scheme: " + name);
}

double PrivacyAllocation::EpsilonFor(const std::string& attribute) const {
  for (const auto& budget : per_attribute) {
    if (budget.attribute == attribute) {
      return budget.epsilon;
    }
  }
  throw std::invalid_argument("no budget for attribute: " + attribute);
}

PrivacyAllocation AllocateUniform(double epsilon,
                                  std::span<const CategoricalDomain> attrs) {
  CheckInputs(epsilon, attrs);
  PrivacyAllocation allocation;
  allocation.scheme = AllocationScheme::kUniform;
  allocation.total_epsilon = epsilon;
  const double share = epsilon / static_cast<double>(attrs.size());
  for (const auto& attr : attrs) {
    allocation.per_attribute.push_back({attr.name, share});
  }
  return allocation;
}

PrivacyAllocation AllocateKBased(double epsilon,
                                 std::span<const CategoricalDomain> attrs) {
  CheckInputs(epsilon, attrs);
  double total_k = 0.0;
  for (const auto& attr : attrs) {
    total_k += static_cast<double>(attr.size());
  }
  PrivacyAllocation allocation;
  allocation.scheme = AllocationScheme::kKBased;
  allocation.total_epsilon = epsilon;
  for (const auto& attr : attrs) {
    allocation.per_attribute.push_back(
        {attr.name, epsilon * static_cast<double>(attr.size()) / total_k});
  }
  return allocation;
}

PrivacyAllocation Allocate(AllocationScheme scheme, double epsilon,
                           std::span<const CategoricalDomain> attrs) {
  return scheme == AllocationScheme::kUniform
             ? AllocateUniform(epsilon, attrs)
             : AllocateKBased(epsilon, attrs);
}

}  // namespace ldpfair
