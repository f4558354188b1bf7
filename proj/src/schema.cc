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

#include "ldpfair/schema.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "ldpfair/random.h"

namespace ldpfair {

namespace {

using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Splits one CSV line on commas. No quoting support: the consumed files are
// plain comma-delimited tables.
std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double Sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

int CategoricalDomain::IndexOf(const std::string& label) const {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

size_t DatasetSchema::AttributeIndex(const std::string& name) const {
  for (size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) {
      return i;
    }
  }
  throw std::invalid_argument("unknown attribute: " + name);
}

const CategoricalDomain& DatasetSchema::Attribute(
    const std::string& name) const {
  return attributes[AttributeIndex(name)];
}

bool DatasetSchema::IsSensitive(const std::string& name) const {
  return std::find(sensitive.begin(), sensitive.end(), name) !=
         sensitive.end();
}

std::vector<std::string> DatasetSchema::NonSensitive() const {
  std::vector<std::string> out;
  for (const auto& attr : attributes) {
    if (attr.name != target && !IsSensitive(attr.name)) {
      out.push_back(attr.name);
    }
  }
  return out;
}

void DatasetSchema::Validate() const {
  if (attributes.empty()) {
    throw std::invalid_argument("schema has no attributes");
  }
  std::unordered_set<std::string> names;
  for (const auto& attr : attributes) {
    if (!names.insert(attr.name).second) {
      throw std::invalid_argument("duplicate attribute: " + attr.name);
    }
    if (attr.values.size() < 2) {
      throw std::invalid_argument("attribute " + attr.name +
                                  " needs at least 2 values");
    }
    std::unordered_set<std::string> labels(attr.values.begin(),
                                           attr.values.end());
    if (labels.size() != attr.values.size()) {
      throw std::invalid_argument("attribute " + attr.name +
                                  " has duplicate values");
    }
  }
  for (const auto& s : sensitive) {
    if (!names.count(s)) {
      throw std::invalid_argument("sensitive attribute not declared: " + s);
    }
  }
  if (!names.count(target)) {
    throw std::invalid_argument("target attribute not declared: " + target);
  }
  if (Attribute(target).size() != 2) {
    throw std::invalid_argument("target must be binary");
  }
  if (IsSensitive(target)) {
    throw std::invalid_argument("target cannot be sensitive");
  }
  if (!IsSensitive(protected_attribute)) {
    throw std::invalid_argument(
        "protected attribute must be one of the sensitive attributes");
  }
  if (Attribute(protected_attribute).IndexOf(privileged_value) < 0) {
    throw std::invalid_argument("privileged_value not in protected domain");
  }
  if (Attribute(target).IndexOf(positive_label) < 0) {
    throw std::invalid_argument("positive_label not in target domain");
  }
}

DatasetSchema ParseSchema(const std::string& json_text) {
  json doc = json::parse(json_text);
  DatasetSchema schema;
  for (const auto& attr : doc.at("attributes")) {
    CategoricalDomain domain;
    domain.name = attr.at("name").get<std::string>();
    for (const auto& v : attr.at("values")) {
      domain.values.push_back(v.get<std::string>());
    }
    schema.attributes.push_back(std::move(domain));
  }
  schema.sensitive = doc.at("sensitive").get<std::vector<std::string>>();
  schema.protected_attribute = doc.at("protected").get<std::string>();
  schema.target = doc.at("target").get<std::string>();
  schema.privileged_value = doc.at("privileged_value").get<std::string>();
  schema.positive_label = doc.at("positive_label").get<std::string>();
  schema.Validate();
  return schema;
}

DatasetSchema LoadSchema(const std::string& path) {
  return ParseSchema(ReadFile(path));
}

void SaveSchema(const DatasetSchema& schema, const std::string& path) {
  schema.Validate();
  json doc;
  doc["attributes"] = json::array();
  for (const CategoricalDomain& domain : schema.attributes) {
    doc["attributes"].push_back(
        {{"name", domain.name}, {"values", domain.values}});
  }
  doc["sensitive"] = schema.sensitive;
  doc["protected"] = schema.protected_attribute;
  doc["target"] = schema.target;
  doc["privileged_value"] = schema.privileged_value;
  doc["positive_label"] = schema.positive_label;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

LoadResult LoadCsv(const std::string& path, const DatasetSchema& schema) {
  schema.Validate();
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty dataset file: " + path);
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() != schema.attributes.size()) {
    throw std::runtime_error("header/schema column count mismatch");
  }
  // Map each schema attribute to its CSV column; header order may differ.
  std::vector<size_t> column_of_attribute(schema.attributes.size());
  std::unordered_map<std::string, size_t> header_index;
  for (size_t c = 0; c < header.size(); ++c) {
    header_index[header[c]] = c;
  }
  for (size_t a = 0; a < schema.attributes.size(); ++a) {
    auto it = header_index.find(schema.attributes[a].name);
    if (it == header_index.end()) {
      throw std::runtime_error("header is missing attribute: " +
                               schema.attributes[a].name);
    }
    column_of_attribute[a] = it->second;
  }

  // Per-attribute label -> index lookup, following declared order.
  std::vector<std::unordered_map<std::string, uint32_t>> lookup(
      schema.attributes.size());
  for (size_t a = 0; a < schema.attributes.size(); ++a) {
    for (size_t v = 0; v < schema.attributes[a].values.size(); ++v) {
      lookup[a][schema.attributes[a].values[v]] = static_cast<uint32_t>(v);
    }
  }

  LoadResult result;
  result.dataset.schema = schema;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      ++result.dropped_rows;
      continue;
    }
    std::vector<uint32_t> row(schema.attributes.size());
    bool ok = true;
    for (size_t a = 0; a < schema.attributes.size(); ++a) {
      const std::string& cell = cells[column_of_attribute[a]];
      auto it = lookup[a].find(cell);
      if (cell.empty() || it == lookup[a].end()) {
        ok = false;
        break;
      }
      row[a] = it->second;
    }
    if (ok) {
      result.dataset.rows.push_back(std::move(row));
    } else {
      ++result.dropped_rows;
    }
  }
  if (result.dataset.rows.empty()) {
    throw std::runtime_error("no valid rows in dataset: " + path);
  }
  return result;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write dataset: " + path);
  }
  const auto& attrs = dataset.schema.attributes;
  for (size_t a = 0; a < attrs.size(); ++a) {
    out << (a ? "," : "") << attrs[a].name;
  }
  out << "\n";
  for (const auto& row : dataset.rows) {
    for (size_t a = 0; a < attrs.size(); ++a) {
      out << (a ? "," : "") << attrs[a].values[row[a]];
    }
    out << "\n";
  }
}

std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& dataset,
                                           double train_fraction,
                                           uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0,1)");
  }
  const size_t n = dataset.size();
  const size_t train_n =
      static_cast<size_t>(std::floor(train_fraction * static_cast<double>(n)));
  if (train_n < 1 || n - train_n < 1) {
    throw std::invalid_argument("dataset too small for requested split");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = n - 1; i > 0; --i) {
    size_t j = rng.NextBelow(i + 1);
    std::swap(order[i], order[j]);
  }
  std::vector<size_t> train_idx(order.begin(), order.begin() + train_n);
  std::vector<size_t> test_idx(order.begin() + train_n, order.end());
  // Keep original row order inside each half.
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  Dataset train;
  train.schema = dataset.schema;
  train.rows.reserve(train_idx.size());
  for (size_t i : train_idx) {
    train.rows.push_back(dataset.rows[i]);
  }
  Dataset test;
  test.schema = dataset.schema;
  test.rows.reserve(test_idx.size());
  for (size_t i : test_idx) {
    test.rows.push_back(dataset.rows[i]);
  }
  return {std::move(train), std::move(test)};
}

std::vector<uint8_t> GroupIndicator(const Dataset& dataset) {
  const size_t attr = dataset.schema.AttributeIndex(
      dataset.schema.protected_attribute);
  const int priv = dataset.schema.attributes[attr].IndexOf(
      dataset.schema.privileged_value);
  if (priv < 0) {
    throw std::invalid_argument("privileged_value not in protected domain");
  }
  std::vector<uint8_t> group(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    group[i] = dataset.rows[i][attr] == static_cast<uint32_t>(priv) ? 1 : 0;
  }
  return group;
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.rows == 0) {
    throw std::invalid_argument("synthetic spec needs rows > 0");
  }
  DatasetSchema schema;
  auto make_domain = [](const std::string& name, uint32_t k) {
    if (k < 2) {
      throw std::invalid_argument("synthetic domain sizes must be >= 2");
    }
    CategoricalDomain d;
    d.name = name;
    for (uint32_t v = 0; v < k; ++v) {
      d.values.push_back(name + "_v" + std::to_string(v));
    }
    return d;
  };

  CategoricalDomain group_domain;
  group_domain.name = "group";
  group_domain.values = {"g0", "g1"};
  schema.attributes.push_back(group_domain);
  schema.sensitive.push_back("group");
  for (size_t j = 0; j < spec.sensitive_sizes.size(); ++j) {
    std::string name = "s" + std::to_string(j + 1);
    schema.attributes.push_back(make_domain(name, spec.sensitive_sizes[j]));
    schema.sensitive.push_back(name);
  }
  for (size_t j = 0; j < spec.feature_sizes.size(); ++j) {
    schema.attributes.push_back(
        make_domain("f" + std::to_string(j + 1), spec.feature_sizes[j]));
  }
  CategoricalDomain target_domain;
  target_domain.name = "outcome";
  target_domain.values = {"neg", "pos"};
  schema.attributes.push_back(target_domain);
  schema.protected_attribute = "group";
  schema.target = "outcome";
  schema.privileged_value = "g1";
  schema.positive_label = "pos";
  schema.Validate();

  // Per-attribute effect weights: non-protected sensitive attributes carry a
  // mild effect, plain features a stronger one, so the classifier has signal
  // beyond the protected column.
  const size_t num_attrs = schema.attributes.size();
  const size_t target_idx = num_attrs - 1;
  std::vector<double> weight(num_attrs, 0.0);
  for (size_t a = 1; a < target_idx; ++a) {
    weight[a] = schema.IsSensitive(schema.attributes[a].name) ? 1.0 : 1.5;
  }

  Dataset data;
  data.schema = schema;
  data.rows.reserve(spec.rows);
  Rng rng(DeriveSeed({spec.seed, 0x5d47a1ull}));
  for (size_t i = 0; i < spec.rows; ++i) {
    std::vector<uint32_t> row(num_attrs);
    bool privileged = rng.Bernoulli(0.5);
    row[0] = privileged ? 1 : 0;
    double score = spec.label_bias * (privileged ? 1.0 : -1.0);
    for (size_t a = 1; a < target_idx; ++a) {
      uint32_t k = schema.attributes[a].size();
      uint32_t c = static_cast<uint32_t>(rng.NextBelow(k));
      row[a] = c;
      double centered = static_cast<double>(c) / (k - 1) - 0.5;
      score += weight[a] * 2.0 * centered;
    }
    row[target_idx] = rng.Bernoulli(Sigmoid(score)) ? 1 : 0;
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace ldpfair
