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

#ifndef LDPFAIR_HARNESS_H_
#define LDPFAIR_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldpfair/budget.h"
#include "ldpfair/fairness.h"
#include "ldpfair/mechanisms.h"
#include "ldpfair/model.h"
#include "ldpfair/schema.h"

namespace ldpfair {

struct SubsetRange {
  int min = 2;
  int max = 6;
};

struct ExperimentConfig {
  std::string dataset_path;
  std::string schema_path;
  std::vector<MechanismKind> mechanisms;
  std::vector<AllocationScheme> allocations;
  std::vector<double> epsilons = {0.25, 0.5, 1, 2, 4, 8, 10, 20, 50};
  int runs = 20;
  uint64_t seed = 42;
  double train_fraction = 0.8;
  // When set, each (run, mechanism, allocation, epsilon) cell sanitizes a
  // fresh random subset of the sensitive attributes instead of all of them.
  std::optional<SubsetRange> dynamic_ds;
  Hyperparameters hyper;
  std::string output_dir = "results";
};

ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Structural checks that need the schema: mechanisms/allocations/epsilons
// nonempty and positive, runs >= 1, fraction in (0,1), classifier settings
// sane, and enough sensitive attributes for the dynamic_ds range.
void ValidateConfig(const ExperimentConfig& cfg, const DatasetSchema& schema);

// One evaluated cell. The baseline row of each run leaves mechanism,
// allocation, and epsilon unset and reports d_s = 0.
struct MetricsRow {
  int run = 0;
  std::optional<MechanismKind> mechanism;
  std::optional<AllocationScheme> allocation;
  std::optional<double> epsilon;
  int d_s = 0;
  FairnessReport fairness;
  UtilityReport utility;
};

// Uniform subset size in [min, min(max, available)]; always keeps the
// protected attribute; result follows the schema's sensitive-list order.
std::vector<std::string> DrawAttributeSubset(const DatasetSchema& schema,
                                             Rng& rng, int min_size = 2,
                                             int max_size = 6);

// Runs the full sweep: per run, one train/test split, one baseline model on
// the plain encoding, then one model per (mechanism, allocation, epsilon)
// cell trained on sanitized data and evaluated on the untouched test
// encoding. Rows are ordered by run, baseline first, then the configured
// mechanism, allocation, and epsilon order. jobs > 1 distributes whole runs
// across threads; the output is identical for any job count.
std::vector<MetricsRow> RunExperiment(const ExperimentConfig& cfg,
                                      const Dataset& dataset, int jobs = 1);

struct AggregateRow {
  std::string mechanism;   // "none" for the baseline group
  std::string allocation;  // "none" for the baseline group
  std::string epsilon;     // formatted value or "NonDP"
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;   // population form, 0 for a single sample
  size_t count = 0;  // rows contributing a defined value
  size_t excluded = 0;
};

// Mean and standard deviation per (mechanism, allocation, epsilon, metric)
// with undefined values excluded and counted. Groups keep first-appearance
// order; metrics follow the fixed CSV column order.
std::vector<AggregateRow> Aggregate(const std::vector<MetricsRow>& rows);

void WriteRowsCsv(const std::vector<MetricsRow>& rows,
                  const std::string& path);
void WriteAggregateCsv(const std::vector<AggregateRow>& rows,
                       const std::string& path);

// One plot_<metric>.csv per metric: epsilon in the first column, one series
// column per (mechanism, allocation) pair, and the baseline mean repeated in
// the last column as a reference line.
void WritePlotTables(const std::vector<AggregateRow>& rows,
                     const std::string& directory);

}  // namespace ldpfair

#endif  // LDPFAIR_HARNESS_H_
