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

#include "ldpfair/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ldpfair/random.h"

namespace ldpfair {
namespace {

// One shared desk-scale dataset: sensitive {group, s1(k=3), s2(k=4)},
// one plain feature, binary outcome.
const Dataset& SmallData() {
  static const Dataset dataset = [] {
    SyntheticSpec spec;
    spec.rows = 320;
    spec.sensitive_sizes = {3, 4};
    spec.feature_sizes = {3};
    spec.seed = 7;
    return GenerateSynthetic(spec);
  }();
  return dataset;
}

ExperimentConfig SmallConfig() {
  ExperimentConfig cfg;
  cfg.mechanisms = {MechanismKind::kGrr};
  cfg.allocations = {AllocationScheme::kUniform, AllocationScheme::kKBased};
  cfg.epsilons = {1.0, 4.0};
  cfg.runs = 2;
  cfg.seed = 99;
  cfg.hyper.epochs = 60;
  return cfg;
}

std::string RowsAsCsv(const std::vector<MetricsRow>& rows,
                      const std::string& name) {
  std::string path = testing::TempDir() + name;
  WriteRowsCsv(rows, path);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(ConfigTest, ParseAppliesDefaults) {
  ExperimentConfig cfg = ParseExperimentConfig(R"({
    "dataset": "d.csv", "schema": "s.json",
    "mechanisms": ["GRR", "OUE"], "allocations": ["uniform"]
  })");
  EXPECT_EQ(cfg.dataset_path, "d.csv");
  EXPECT_EQ(cfg.schema_path, "s.json");
  ASSERT_EQ(cfg.mechanisms.size(), 2u);
  EXPECT_EQ(cfg.mechanisms[1], MechanismKind::kOue);
  ASSERT_EQ(cfg.allocations.size(), 1u);
  std::vector<double> grid = {0.25, 0.5, 1, 2, 4, 8, 10, 20, 50};
  EXPECT_EQ(cfg.epsilons, grid);
  EXPECT_EQ(cfg.runs, 20);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.train_fraction, 0.8);
  EXPECT_FALSE(cfg.dynamic_ds.has_value());
  EXPECT_EQ(cfg.hyper.epochs, 300);
  EXPECT_EQ(cfg.output_dir, "results");
}

TEST(ConfigTest, ParseReadsEveryField) {
  ExperimentConfig cfg = ParseExperimentConfig(R"({
    "dataset": "a.csv", "schema": "a.json",
    "mechanisms": ["THE"], "allocations": ["k-based"],
    "epsilons": [0.5, 2], "runs": 3, "seed": 7, "train_fraction": 0.7,
    "dynamic_ds": {"min": 2, "max": 3},
    "hyperparameters": {"learning_rate": 0.05, "l2": 0.001,
                        "epochs": 10, "threshold": 0.4},
    "output": "out"
  })");
  EXPECT_EQ(cfg.mechanisms[0], MechanismKind::kThe);
  EXPECT_EQ(cfg.allocations[0], AllocationScheme::kKBased);
  std::vector<double> eps = {0.5, 2};
  EXPECT_EQ(cfg.epsilons, eps);
  EXPECT_EQ(cfg.runs, 3);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_DOUBLE_EQ(cfg.train_fraction, 0.7);
  ASSERT_TRUE(cfg.dynamic_ds.has_value());
  EXPECT_EQ(cfg.dynamic_ds->min, 2);
  EXPECT_EQ(cfg.dynamic_ds->max, 3);
  EXPECT_DOUBLE_EQ(cfg.hyper.learning_rate, 0.05);
  EXPECT_DOUBLE_EQ(cfg.hyper.l2, 0.001);
  EXPECT_EQ(cfg.hyper.epochs, 10);
  EXPECT_DOUBLE_EQ(cfg.hyper.threshold, 0.4);
  EXPECT_EQ(cfg.output_dir, "out");
}

TEST(ConfigTest, ParseRejectsUnknownNamesAndMissingKeys) {
  EXPECT_THROW(ParseExperimentConfig(R"({
    "dataset": "d", "schema": "s",
    "mechanisms": ["XYZ"], "allocations": ["uniform"]
  })"),
               std::invalid_argument);
  EXPECT_THROW(ParseExperimentConfig(R"({
    "dataset": "d", "schema": "s",
    "mechanisms": ["GRR"], "allocations": ["proportional"]
  })"),
               std::invalid_argument);
  EXPECT_THROW(ParseExperimentConfig(R"({"dataset": "d"})"), std::exception);
  EXPECT_THROW(ParseExperimentConfig("not json"), std::exception);
}

TEST(ConfigTest, ValidateCatchesBadSettings) {
  const DatasetSchema& schema = SmallData().schema;
  ExperimentConfig good = SmallConfig();
  ValidateConfig(good, schema);

  ExperimentConfig cfg = good;
  cfg.mechanisms.clear();
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.allocations.clear();
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.epsilons = {1.0, -2.0};
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.epsilons.clear();
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.runs = 0;
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.train_fraction = 1.0;
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.hyper.learning_rate = 0.0;
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.hyper.threshold = 1.5;
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.dynamic_ds = SubsetRange{3, 2};
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  // The schema has three sensitive attributes, so max = 6 cannot be promised.
  cfg = good;
  cfg.dynamic_ds = SubsetRange{2, 6};
  EXPECT_THROW(ValidateConfig(cfg, schema), std::invalid_argument);

  cfg = good;
  cfg.dynamic_ds = SubsetRange{2, 3};
  ValidateConfig(cfg, schema);
}

TEST(DrawAttributeSubsetTest, TakesEverythingWhenRangeDemandsIt) {
  const DatasetSchema& schema = SmallData().schema;
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> subset = DrawAttributeSubset(schema, rng, 3, 6);
    EXPECT_EQ(subset, schema.sensitive);
  }
}

TEST(DrawAttributeSubsetTest, AlwaysKeepsProtectedAndSchemaOrder) {
  const DatasetSchema& schema = SmallData().schema;
  Rng rng(405);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> subset = DrawAttributeSubset(schema, rng, 2, 3);
    ASSERT_GE(subset.size(), 2u);
    ASSERT_LE(subset.size(), 3u);
    EXPECT_NE(std::find(subset.begin(), subset.end(),
                        schema.protected_attribute),
              subset.end());
    // Subsequence of the sensitive list.
    size_t cursor = 0;
    for (const std::string& name : subset) {
      while (cursor < schema.sensitive.size() &&
             schema.sensitive[cursor] != name) {
        ++cursor;
      }
      ASSERT_LT(cursor, schema.sensitive.size()) << name;
      ++cursor;
    }
  }
}

TEST(DrawAttributeSubsetTest, SizeIsUniformOverTheRange) {
  const DatasetSchema& schema = SmallData().schema;  // 3 sensitive attributes
  Rng rng(406);
  int counts[2] = {0, 0};  // sizes 2 and 3
  const int trials = 3000;
  for (int trial = 0; trial < trials; ++trial) {
    size_t size = DrawAttributeSubset(schema, rng, 2, 6).size();
    ASSERT_TRUE(size == 2 || size == 3);
    ++counts[size - 2];
  }
  EXPECT_NEAR(counts[0], trials / 2, 120);
  EXPECT_NEAR(counts[1], trials / 2, 120);
}

TEST(DrawAttributeSubsetTest, NonProtectedChoicesAreUniform) {
  const DatasetSchema& schema = SmallData().schema;
  Rng rng(407);
  int s1 = 0, s2 = 0;
  const int trials = 4000;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::string> subset = DrawAttributeSubset(schema, rng, 2, 2);
    ASSERT_EQ(subset.size(), 2u);
    if (std::find(subset.begin(), subset.end(), "s1") != subset.end()) ++s1;
    if (std::find(subset.begin(), subset.end(), "s2") != subset.end()) ++s2;
  }
  EXPECT_EQ(s1 + s2, trials);
  EXPECT_NEAR(s1, trials / 2, 150);
}

TEST(DrawAttributeSubsetTest, RejectsImpossibleRanges) {
  const DatasetSchema& schema = SmallData().schema;
  Rng rng(408);
  EXPECT_THROW(DrawAttributeSubset(schema, rng, 0, 2), std::invalid_argument);
  EXPECT_THROW(DrawAttributeSubset(schema, rng, 3, 2), std::invalid_argument);
  EXPECT_THROW(DrawAttributeSubset(schema, rng, 4, 6), std::invalid_argument);
}

TEST(RunExperimentTest, RowLayoutFollowsConfigOrder) {
  ExperimentConfig cfg = SmallConfig();
  std::vector<MetricsRow> rows = RunExperiment(cfg, SmallData());
  // Per run: one baseline plus 1 mechanism x 2 allocations x 2 epsilons.
  ASSERT_EQ(rows.size(), 2u * 5u);
  for (int run = 0; run < 2; ++run) {
    const MetricsRow& baseline = rows[static_cast<size_t>(run) * 5];
    EXPECT_EQ(baseline.run, run);
    EXPECT_FALSE(baseline.mechanism.has_value());
    EXPECT_FALSE(baseline.allocation.has_value());
    EXPECT_FALSE(baseline.epsilon.has_value());
    EXPECT_EQ(baseline.d_s, 0);
    for (int cell = 0; cell < 4; ++cell) {
      const MetricsRow& row = rows[static_cast<size_t>(run) * 5 + 1 +
                                   static_cast<size_t>(cell)];
      EXPECT_EQ(row.run, run);
      ASSERT_TRUE(row.mechanism.has_value());
      EXPECT_EQ(*row.mechanism, MechanismKind::kGrr);
      ASSERT_TRUE(row.allocation.has_value());
      EXPECT_EQ(*row.allocation, cell < 2 ? AllocationScheme::kUniform
                                          : AllocationScheme::kKBased);
      ASSERT_TRUE(row.epsilon.has_value());
      EXPECT_DOUBLE_EQ(*row.epsilon, cell % 2 == 0 ? 1.0 : 4.0);
      EXPECT_EQ(row.d_s, 3);  // all sensitive attributes
    }
  }
}

TEST(RunExperimentTest, DeterministicAcrossCallsAndJobCounts) {
  ExperimentConfig cfg = SmallConfig();
  std::string first = RowsAsCsv(RunExperiment(cfg, SmallData(), 1), "a.csv");
  std::string second = RowsAsCsv(RunExperiment(cfg, SmallData(), 1), "b.csv");
  std::string threaded =
      RowsAsCsv(RunExperiment(cfg, SmallData(), 4), "c.csv");
  EXPECT_EQ(first, second);
  EXPECT_EQ(first, threaded);
}

TEST(RunExperimentTest, BaselineIgnoresMechanismList) {
  ExperimentConfig cfg = SmallConfig();
  cfg.epsilons = {1.0};
  cfg.allocations = {AllocationScheme::kUniform};
  ExperimentConfig other = cfg;
  other.mechanisms = {MechanismKind::kOue};
  std::vector<MetricsRow> a = RunExperiment(cfg, SmallData());
  std::vector<MetricsRow> b = RunExperiment(other, SmallData());
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); i += 2) {  // baseline rows
    EXPECT_EQ(a[i].utility.accuracy, b[i].utility.accuracy);
    EXPECT_EQ(a[i].utility.f1, b[i].utility.f1);
    EXPECT_EQ(a[i].fairness.statistical_parity,
              b[i].fairness.statistical_parity);
  }
}

TEST(RunExperimentTest, DynamicSubsetShrinksDs) {
  ExperimentConfig cfg = SmallConfig();
  cfg.runs = 1;
  cfg.epsilons = {0.5, 1.0, 2.0};
  cfg.dynamic_ds = SubsetRange{2, 3};
  std::vector<MetricsRow> rows = RunExperiment(cfg, SmallData());
  std::set<int> seen;
  for (const MetricsRow& row : rows) {
    if (!row.mechanism.has_value()) {
      EXPECT_EQ(row.d_s, 0);
      continue;
    }
    EXPECT_GE(row.d_s, 2);
    EXPECT_LE(row.d_s, 3);
    seen.insert(row.d_s);
  }
  EXPECT_FALSE(seen.empty());
}

TEST(RunExperimentTest, HugeBudgetMatchesBaseline) {
  ExperimentConfig cfg = SmallConfig();
  cfg.runs = 1;
  cfg.epsilons = {50.0};
  cfg.allocations = {AllocationScheme::kUniform};
  std::vector<MetricsRow> rows = RunExperiment(cfg, SmallData());
  ASSERT_EQ(rows.size(), 2u);
  const MetricsRow& baseline = rows[0];
  const MetricsRow& sanitized = rows[1];
  EXPECT_NEAR(sanitized.utility.accuracy, baseline.utility.accuracy, 0.02);
  EXPECT_NEAR(sanitized.utility.f1, baseline.utility.f1, 0.02);
  EXPECT_NEAR(sanitized.utility.recall, baseline.utility.recall, 0.02);
  ASSERT_TRUE(baseline.utility.auc.has_value());
  ASSERT_TRUE(sanitized.utility.auc.has_value());
  EXPECT_NEAR(*sanitized.utility.auc, *baseline.utility.auc, 0.02);
}

MetricsRow CellRow(int run, double accuracy) {
  MetricsRow row;
  row.run = run;
  row.mechanism = MechanismKind::kGrr;
  row.allocation = AllocationScheme::kUniform;
  row.epsilon = 1.0;
  row.d_s = 2;
  row.utility.accuracy = accuracy;
  row.fairness.disparate_impact = run % 2 == 0
                                      ? std::optional<double>(0.5)
                                      : std::nullopt;
  return row;
}

TEST(AggregateTest, MeanAndPopulationSd) {
  std::vector<MetricsRow> rows;
  for (int run = 0; run < 20; ++run) {
    rows.push_back(CellRow(run, static_cast<double>(run)));
  }
  std::vector<AggregateRow> agg = Aggregate(rows);
  const AggregateRow* acc = nullptr;
  const AggregateRow* di = nullptr;
  for (const AggregateRow& row : agg) {
    if (row.metric == "acc") acc = &row;
    if (row.metric == "DI") di = &row;
  }
  ASSERT_NE(acc, nullptr);
  EXPECT_EQ(acc->mechanism, "GRR");
  EXPECT_EQ(acc->allocation, "uniform");
  EXPECT_EQ(acc->epsilon, "1");
  EXPECT_EQ(acc->count, 20u);
  EXPECT_EQ(acc->excluded, 0u);
  // Values 0..19: mean 9.5, population variance 665/20.
  EXPECT_NEAR(acc->mean, 9.5, 1e-12);
  EXPECT_NEAR(acc->sd, std::sqrt(33.25), 1e-12);

  ASSERT_NE(di, nullptr);
  EXPECT_EQ(di->count, 10u);
  EXPECT_EQ(di->excluded, 10u);
  EXPECT_NEAR(di->mean, 0.5, 1e-15);
  EXPECT_NEAR(di->sd, 0.0, 1e-15);
}

TEST(AggregateTest, SingleRowHasZeroSd) {
  std::vector<MetricsRow> rows = {CellRow(0, 0.625)};
  for (const AggregateRow& row : Aggregate(rows)) {
    if (row.metric == "acc") {
      EXPECT_EQ(row.count, 1u);
      EXPECT_DOUBLE_EQ(row.mean, 0.625);
      EXPECT_EQ(row.sd, 0.0);
    }
  }
}

TEST(AggregateTest, GroupsKeepFirstAppearanceOrder) {
  std::vector<MetricsRow> rows;
  MetricsRow baseline;
  baseline.run = 0;
  rows.push_back(baseline);
  rows.push_back(CellRow(0, 0.5));
  rows.push_back(baseline);
  rows.push_back(CellRow(1, 0.75));
  std::vector<AggregateRow> agg = Aggregate(rows);
  ASSERT_EQ(agg.size(), 16u);  // two groups x eight metrics
  EXPECT_EQ(agg[0].mechanism, "none");
  EXPECT_EQ(agg[0].epsilon, "NonDP");
  EXPECT_EQ(agg[0].metric, "DI");
  EXPECT_EQ(agg[7].metric, "recall");
  EXPECT_EQ(agg[8].mechanism, "GRR");
  EXPECT_EQ(agg[8].metric, "DI");
  // The two cell rows average.
  EXPECT_DOUBLE_EQ(agg[12].mean, 0.625);
}

TEST(AggregateTest, EmptyInputThrows) {
  EXPECT_THROW(Aggregate({}), std::invalid_argument);
}

TEST(CsvTest, RowsCsvFreezesHeaderAndNaEncoding) {
  MetricsRow row;
  row.run = 3;
  row.mechanism = MechanismKind::kOue;
  row.allocation = AllocationScheme::kKBased;
  row.epsilon = 0.25;
  row.d_s = 2;
  row.fairness.disparate_impact = 0.5;
  row.fairness.statistical_parity = 0.25;
  row.fairness.equal_opportunity = std::nullopt;
  row.fairness.accuracy_difference = -0.125;
  row.utility.accuracy = 0.75;
  row.utility.f1 = 0.5;
  row.utility.auc = std::nullopt;
  row.utility.recall = 0.25;
  std::string csv = RowsAsCsv({row}, "frozen_rows.csv");
  EXPECT_EQ(csv,
            "run,mechanism,allocation,epsilon,d_s,DI,SPD,EOD,OAD,"
            "acc,f1,auc,recall\n"
            "3,OUE,k-based,0.25,2,0.5,0.25,NA,-0.125,0.75,0.5,NA,0.25\n");
}

TEST(CsvTest, BaselineRowUsesNoneAndNonDp) {
  MetricsRow row;
  row.run = 0;
  row.utility.accuracy = 0.5;
  std::string csv = RowsAsCsv({row}, "frozen_baseline.csv");
  EXPECT_NE(csv.find("\n0,none,none,NonDP,0,"), std::string::npos);
}

TEST(CsvTest, AggregateCsvFreezesHeaderAndEmptyGroups) {
  AggregateRow defined;
  defined.mechanism = "GRR";
  defined.allocation = "uniform";
  defined.epsilon = "2";
  defined.metric = "acc";
  defined.mean = 0.75;
  defined.sd = 0.125;
  defined.count = 4;
  defined.excluded = 1;
  AggregateRow empty = defined;
  empty.metric = "EOD";
  empty.count = 0;
  empty.excluded = 5;
  std::string path = testing::TempDir() + "frozen_agg.csv";
  WriteAggregateCsv({defined, empty}, path);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  EXPECT_EQ(buffer.str(),
            "mechanism,allocation,epsilon,metric,mean,sd,count,excluded\n"
            "GRR,uniform,2,acc,0.75,0.125,4,1\n"
            "GRR,uniform,2,EOD,NA,NA,0,5\n");
}

AggregateRow PlotRow(const std::string& mechanism,
                     const std::string& allocation,
                     const std::string& epsilon, const std::string& metric,
                     double mean) {
  AggregateRow row;
  row.mechanism = mechanism;
  row.allocation = allocation;
  row.epsilon = epsilon;
  row.metric = metric;
  row.mean = mean;
  row.count = 2;
  return row;
}

TEST(CsvTest, PlotTablesSortEpsilonNumericallyWithBaselineColumn) {
  std::vector<AggregateRow> agg;
  for (const char* metric :
       {"DI", "SPD", "EOD", "OAD", "acc", "f1", "auc", "recall"}) {
    agg.push_back(PlotRow("none", "none", "NonDP", metric, 0.75));
    agg.push_back(PlotRow("GRR", "uniform", "4", metric, 0.5));
    agg.push_back(PlotRow("GRR", "uniform", "0.25", metric, 0.25));
  }
  std::string dir = testing::TempDir() + "plots";
  WritePlotTables(agg, dir);
  std::ifstream in(dir + "/plot_acc.csv");
  ASSERT_TRUE(in.is_open());
  std::string header, first, second;
  ASSERT_TRUE(std::getline(in, header));
  ASSERT_TRUE(std::getline(in, first));
  ASSERT_TRUE(std::getline(in, second));
  EXPECT_EQ(header, "epsilon,GRR_uniform,baseline");
  EXPECT_EQ(first, "0.25,0.25,0.75");
  EXPECT_EQ(second, "4,0.5,0.75");
  for (const char* metric : {"DI", "SPD", "EOD", "OAD", "f1", "auc",
                             "recall"}) {
    std::ifstream exists(dir + "/plot_" + metric + ".csv");
    EXPECT_TRUE(exists.is_open()) << metric;
  }
}

}  // namespace
}  // namespace ldpfair
