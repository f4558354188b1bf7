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

#ifndef LDPFAIR_PIPELINE_H_
#define LDPFAIR_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpfair/budget.h"
#include "ldpfair/mechanisms.h"
#include "ldpfair/schema.h"

namespace ldpfair {

struct ColumnRef {
  std::string attribute;
  std::string category;
};

// Homogeneous binary feature matrix: every attribute occupies a block of k
// indicator columns regardless of which mechanism produced it. Labels and the
// group vector always come from the original (unperturbed) data.
struct EncodedMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<uint8_t> features;  // row-major rows x cols, each 0/1
  std::vector<uint8_t> labels;
  std::vector<uint8_t> group;
  std::vector<ColumnRef> column_map;

  uint8_t At(size_t row, size_t col) const {
    return features[row * cols + col];
  }
};

// Maps any report onto a length-k binary vector: one-hot for a value report,
// hash-support indicator for local hashing, the bits unchanged for unary
// encodings, subset indicator for subset selection, and the thresholded
// support for a noisy histogram (theta required in that case only).
std::vector<uint8_t> EncodeReport(const Report& report, uint32_t k,
                                  std::optional<double> theta = std::nullopt);

// Pure one-hot encoding of every attribute except the target; no randomness.
EncodedMatrix EncodePlain(const Dataset& dataset);

// Perturbs each cell of every sensitive attribute with that attribute's
// budget, encodes the reports, and one-hot encodes the remaining attributes.
// The allocation must cover exactly the schema's sensitive attributes. Each
// (attribute, row) cell draws from its own generator stream derived from
// base_seed, so results are independent of traversal or worker order.
EncodedMatrix SanitizeTraining(const Dataset& dataset,
                               const PrivacyAllocation& allocation,
                               MechanismKind kind, uint64_t base_seed);

// Sparse dump: one "row,col,1" line per set bit.
void WriteSparseTriplets(const EncodedMatrix& matrix, const std::string& path);

// Sidecar: "col,attribute,category" lines aligned with the feature columns.
void WriteColumnMap(const EncodedMatrix& matrix, const std::string& path);

}  // namespace ldpfair

#endif  // LDPFAIR_PIPELINE_H_
