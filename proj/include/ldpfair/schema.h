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

#ifndef LDPFAIR_SCHEMA_H_
#define LDPFAIR_SCHEMA_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ldpfair {

// One categorical attribute: an ordered list of distinct category labels.
// Category indices follow the declared order, so runs are reproducible
// across shuffled input files.
struct CategoricalDomain {
  std::string name;
  std::vector<std::string> values;

  uint32_t size() const { return static_cast<uint32_t>(values.size()); }

  // Index of a label in this domain, or -1 if absent.
  int IndexOf(const std::string& label) const;
};

// Attribute roles for one dataset. The protected attribute (fairness
// viewpoint) is always one of the sensitive attributes (privacy viewpoint);
// the binary target is neither.
struct DatasetSchema {
  std::vector<CategoricalDomain> attributes;  // includes the target
  std::vector<std::string> sensitive;
  std::string protected_attribute;
  std::string target;
  std::string privileged_value;  // category of the protected attribute -> group 1
  std::string positive_label;    // category of the target -> label 1

  size_t AttributeIndex(const std::string& name) const;  // throws if absent
  const CategoricalDomain& Attribute(const std::string& name) const;
  bool IsSensitive(const std::string& name) const;

  // Attribute names that are neither sensitive nor the target.
  std::vector<std::string> NonSensitive() const;

  // Checks all structural invariants; throws std::invalid_argument.
  void Validate() const;
};

// Immutable after load; rows hold one category index per attribute
// (including the target), in schema attribute order.
struct Dataset {
  DatasetSchema schema;
  std::vector<std::vector<uint32_t>> rows;

  size_t size() const { return rows.size(); }
};

struct LoadResult {
  Dataset dataset;
  size_t dropped_rows = 0;  // rows with empty or out-of-domain cells
};

// Reads a schema description from a JSON file. Expected shape:
//   { "attributes": [{"name": ..., "values": [...]}, ...],
//     "sensitive": [...], "protected": ..., "target": ...,
//     "privileged_value": ..., "positive_label": ... }
DatasetSchema LoadSchema(const std::string& path);
DatasetSchema ParseSchema(const std::string& json_text);

// Writes the schema in the shape LoadSchema reads.
void SaveSchema(const DatasetSchema& schema, const std::string& path);

// Loads a comma-delimited UTF-8 CSV with a header row. Header names must
// match the schema's attribute set. Rows containing an empty cell or a value
// outside the declared domain are dropped and counted.
LoadResult LoadCsv(const std::string& path, const DatasetSchema& schema);

// Writes the dataset back out with labels in schema attribute order.
// Reloading the output yields identical indices.
void WriteCsv(const Dataset& dataset, const std::string& path);

// Disjoint row partition of sizes floor(train_fraction*n) and the remainder.
// Deterministic for a fixed seed; both halves share the schema.
std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& dataset,
                                           double train_fraction,
                                           uint64_t seed);

// Entry i is 1 iff row i's protected attribute equals the privileged value.
std::vector<uint8_t> GroupIndicator(const Dataset& dataset);

// Desk-scale synthetic data for tests and demos. The protected attribute is
// binary ("g0"/"g1", privileged "g1"); the label leans toward the privileged
// group by label_bias on the log-odds scale, and every other attribute
// carries a monotone per-category effect so a linear model has signal.
struct SyntheticSpec {
  size_t rows = 1000;
  // Domain sizes of sensitive attributes beyond the protected one.
  std::vector<uint32_t> sensitive_sizes = {4, 8, 16};
  // Domain sizes of non-sensitive attributes.
  std::vector<uint32_t> feature_sizes = {3, 4, 5};
  double label_bias = 1.25;
  uint64_t seed = 1;
};

Dataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace ldpfair

#endif  // LDPFAIR_SCHEMA_H_
