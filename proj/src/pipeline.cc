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

#include "ldpfair/pipeline.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <variant>

#include "ldpfair/random.h"

namespace ldpfair {
namespace {

// Stream tags keep the per-cell generator seeds disjoint from any other
// derived seed in the program.
constexpr uint64_t kCellTag = 0x70697065u;  // "pipe"

struct EncodeVisitor {
  uint32_t k;
  std::optional<double> theta;

  std::vector<uint8_t> operator()(const ValueReport& r) const {
    if (r.value >= k) throw std::invalid_argument("report value out of range");
    std::vector<uint8_t> bits(k, 0);
    bits[r.value] = 1;
    return bits;
  }

  std::vector<uint8_t> operator()(const HashReport& r) const {
    std::vector<uint8_t> bits(k, 0);
    for (uint32_t v = 0; v < k; ++v) {
      if (HashToRange(r.hash.seed, v, r.hash.range) == r.bucket) bits[v] = 1;
    }
    return bits;
  }

  std::vector<uint8_t> operator()(const BitsReport& r) const {
    if (r.bits.size() != k) throw std::invalid_argument("bit report size");
    return r.bits;
  }

  std::vector<uint8_t> operator()(const SubsetReport& r) const {
    std::vector<uint8_t> bits(k, 0);
    for (uint32_t v : r.members) {
      if (v >= k) throw std::invalid_argument("subset member out of range");
      bits[v] = 1;
    }
    return bits;
  }

  std::vector<uint8_t> operator()(const HistogramReport& r) const {
    if (!theta.has_value()) {
      throw std::invalid_argument("histogram report requires theta");
    }
    if (r.values.size() != k) throw std::invalid_argument("histogram size");
    std::vector<uint8_t> bits(k, 0);
    for (uint32_t v = 0; v < k; ++v) {
      if (r.values[v] > *theta) bits[v] = 1;
    }
    return bits;
  }
};

// Column layout shared by plain and sanitized encodings: schema order, target
// attribute skipped, k columns per attribute.
struct Layout {
  std::vector<size_t> attr_index;    // dataset attribute index per block
  std::vector<size_t> col_offset;    // first column of each block
  size_t cols = 0;
  std::vector<ColumnRef> column_map;
};

Layout BuildLayout(const DatasetSchema& schema) {
  Layout layout;
  size_t target = schema.AttributeIndex(schema.target);
  for (size_t a = 0; a < schema.attributes.size(); ++a) {
    if (a == target) continue;
    const CategoricalDomain& domain = schema.attributes[a];
    layout.attr_index.push_back(a);
    layout.col_offset.push_back(layout.cols);
    for (const std::string& value : domain.values) {
      layout.column_map.push_back({domain.name, value});
    }
    layout.cols += domain.size();
  }
  return layout;
}

void FillLabelsAndGroup(const Dataset& dataset, EncodedMatrix* matrix) {
  const DatasetSchema& schema = dataset.schema;
  size_t target = schema.AttributeIndex(schema.target);
  const CategoricalDomain& target_domain = schema.attributes[target];
  uint32_t positive = target_domain.IndexOf(schema.positive_label);
  matrix->labels.resize(dataset.rows.size());
  for (size_t i = 0; i < dataset.rows.size(); ++i) {
    matrix->labels[i] = dataset.rows[i][target] == positive ? 1 : 0;
  }
  matrix->group = GroupIndicator(dataset);
}

}  // namespace

std::vector<uint8_t> EncodeReport(const Report& report, uint32_t k,
                                  std::optional<double> theta) {
  if (k < 2) throw std::invalid_argument("domain size must be at least 2");
  return std::visit(EncodeVisitor{k, theta}, report);
}

EncodedMatrix EncodePlain(const Dataset& dataset) {
  Layout layout = BuildLayout(dataset.schema);
  EncodedMatrix matrix;
  matrix.rows = dataset.rows.size();
  matrix.cols = layout.cols;
  matrix.column_map = std::move(layout.column_map);
  matrix.features.assign(matrix.rows * matrix.cols, 0);
  for (size_t i = 0; i < matrix.rows; ++i) {
    for (size_t b = 0; b < layout.attr_index.size(); ++b) {
      uint32_t value = dataset.rows[i][layout.attr_index[b]];
      matrix.features[i * matrix.cols + layout.col_offset[b] + value] = 1;
    }
  }
  FillLabelsAndGroup(dataset, &matrix);
  return matrix;
}

EncodedMatrix SanitizeTraining(const Dataset& dataset,
                               const PrivacyAllocation& allocation,
                               MechanismKind kind, uint64_t base_seed) {
  const DatasetSchema& schema = dataset.schema;
  Layout layout = BuildLayout(schema);

  // Per-block sanitization plan: epsilon if allocated, nullopt for plain
  // one-hot. The allocation and the schema's sensitive set must coincide.
  std::vector<std::optional<double>> block_epsilon(layout.attr_index.size());
  std::unordered_map<std::string, size_t> block_of;
  for (size_t b = 0; b < layout.attr_index.size(); ++b) {
    block_of[schema.attributes[layout.attr_index[b]].name] = b;
  }
  for (const AttributeBudget& budget : allocation.per_attribute) {
    auto it = block_of.find(budget.attribute);
    if (it == block_of.end()) {
      throw std::invalid_argument("allocated attribute not in schema: " +
                                  budget.attribute);
    }
    if (!schema.IsSensitive(budget.attribute)) {
      throw std::invalid_argument("allocated attribute not sensitive: " +
                                  budget.attribute);
    }
    if (block_epsilon[it->second].has_value()) {
      throw std::invalid_argument("attribute allocated twice: " +
                                  budget.attribute);
    }
    block_epsilon[it->second] = budget.epsilon;
  }
  for (const std::string& name : schema.sensitive) {
    if (!block_epsilon[block_of.at(name)].has_value()) {
      throw std::invalid_argument("sensitive attribute lacks a budget: " +
                                  name);
    }
  }

  // The threshold for noisy-histogram reports depends only on the budget, so
  // solve it once per attribute rather than once per cell.
  std::vector<double> block_theta(layout.attr_index.size(), 0.0);
  if (kind == MechanismKind::kThe) {
    for (size_t b = 0; b < layout.attr_index.size(); ++b) {
      if (block_epsilon[b].has_value()) {
        block_theta[b] = OptimizeTheta(*block_epsilon[b]);
      }
    }
  }

  EncodedMatrix matrix;
  matrix.rows = dataset.rows.size();
  matrix.cols = layout.cols;
  matrix.column_map = std::move(layout.column_map);
  matrix.features.assign(matrix.rows * matrix.cols, 0);

  uint64_t mechanism_id = static_cast<uint64_t>(kind);
  for (size_t b = 0; b < layout.attr_index.size(); ++b) {
    size_t a = layout.attr_index[b];
    uint32_t k = static_cast<uint32_t>(schema.attributes[a].size());
    size_t offset = layout.col_offset[b];
    if (!block_epsilon[b].has_value()) {
      for (size_t i = 0; i < matrix.rows; ++i) {
        uint32_t value = dataset.rows[i][a];
        matrix.features[i * matrix.cols + offset + value] = 1;
      }
      continue;
    }
    double epsilon = *block_epsilon[b];
    std::optional<double> theta;
    if (kind == MechanismKind::kThe) theta = block_theta[b];
    for (size_t i = 0; i < matrix.rows; ++i) {
      uint32_t value = dataset.rows[i][a];
      Rng rng(DeriveSeed({base_seed, kCellTag, mechanism_id,
                          static_cast<uint64_t>(a),
                          static_cast<uint64_t>(i)}));
      Report report = Perturb(kind, value, k, epsilon, rng);
      std::vector<uint8_t> bits = EncodeReport(report, k, theta);
      for (uint32_t c = 0; c < k; ++c) {
        matrix.features[i * matrix.cols + offset + c] = bits[c];
      }
    }
  }

  FillLabelsAndGroup(dataset, &matrix);
  return matrix;
}

void WriteSparseTriplets(const EncodedMatrix& matrix,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "row,col,value\n";
  for (size_t i = 0; i < matrix.rows; ++i) {
    for (size_t c = 0; c < matrix.cols; ++c) {
      if (matrix.features[i * matrix.cols + c]) {
        out << i << ',' << c << ",1\n";
      }
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void WriteColumnMap(const EncodedMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "col,attribute,category\n";
  for (size_t c = 0; c < matrix.column_map.size(); ++c) {
    out << c << ',' << matrix.column_map[c].attribute << ','
        << matrix.column_map[c].category << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ldpfair
