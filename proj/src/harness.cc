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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "ldpfair/pipeline.h"
#include "ldpfair/random.h"

namespace ldpfair {
namespace {

using nlohmann::json;

// Stream tags separating the harness's independent uses of cfg.seed.
constexpr uint64_t kSplitTag = 0x73706c74u;     // "splt"
constexpr uint64_t kSanitizeTag = 0x73616e7au;  // "sanz"
constexpr uint64_t kSubsetTag = 0x73756273u;    // "subs"

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string FormatOptional(const std::optional<double>& value) {
  return value.has_value() ? FormatDouble(*value) : std::string("NA");
}

std::string MechanismLabel(const MetricsRow& row) {
  return row.mechanism.has_value() ? MechanismName(*row.mechanism) : "none";
}

std::string AllocationLabel(const MetricsRow& row) {
  return row.allocation.has_value() ? AllocationSchemeName(*row.allocation)
                                    : "none";
}

std::string EpsilonLabel(const MetricsRow& row) {
  return row.epsilon.has_value() ? FormatDouble(*row.epsilon) : "NonDP";
}

using MetricGetter = std::optional<double> (*)(const MetricsRow&);

struct MetricColumn {
  const char* name;
  MetricGetter get;
};

constexpr MetricColumn kMetricColumns[] = {
    {"DI", [](const MetricsRow& r) { return r.fairness.disparate_impact; }},
    {"SPD",
     [](const MetricsRow& r) {
       return std::optional<double>(r.fairness.statistical_parity);
     }},
    {"EOD", [](const MetricsRow& r) { return r.fairness.equal_opportunity; }},
    {"OAD",
     [](const MetricsRow& r) {
       return std::optional<double>(r.fairness.accuracy_difference);
     }},
    {"acc",
     [](const MetricsRow& r) {
       return std::optional<double>(r.utility.accuracy);
     }},
    {"f1",
     [](const MetricsRow& r) { return std::optional<double>(r.utility.f1); }},
    {"auc", [](const MetricsRow& r) { return r.utility.auc; }},
    {"recall",
     [](const MetricsRow& r) {
       return std::optional<double>(r.utility.recall);
     }},
};

std::pair<FairnessReport, UtilityReport> EvaluateOnTest(
    const ClassifierParams& params, const EncodedMatrix& test,
    const Hyperparameters& hyper) {
  std::vector<double> proba =
      PredictProba(test.features, test.rows, test.cols, params);
  std::vector<uint8_t> pred(test.rows);
  for (size_t i = 0; i < test.rows; ++i) {
    pred[i] = proba[i] > hyper.threshold ? 1 : 0;
  }
  return {EvaluateFairness(pred, test.labels, test.group),
          ComputeUtility(pred, proba, test.labels)};
}

std::vector<MetricsRow> ComputeRun(const ExperimentConfig& cfg,
                                   const Dataset& dataset, int run) {
  const DatasetSchema& schema = dataset.schema;
  uint64_t split_seed =
      DeriveSeed({cfg.seed, kSplitTag, static_cast<uint64_t>(run)});
  auto [train, test] =
      TrainTestSplit(dataset, cfg.train_fraction, split_seed);
  EncodedMatrix plain_train = EncodePlain(train);
  EncodedMatrix plain_test = EncodePlain(test);

  std::vector<MetricsRow> rows;
  MetricsRow baseline;
  baseline.run = run;
  ClassifierParams baseline_params =
      TrainLogistic(plain_train.features, plain_train.rows, plain_train.cols,
                    plain_train.labels, cfg.hyper);
  std::tie(baseline.fairness, baseline.utility) =
      EvaluateOnTest(baseline_params, plain_test, cfg.hyper);
  rows.push_back(std::move(baseline));

  uint64_t sanitize_seed =
      DeriveSeed({cfg.seed, kSanitizeTag, static_cast<uint64_t>(run)});
  for (MechanismKind mechanism : cfg.mechanisms) {
    for (AllocationScheme scheme : cfg.allocations) {
      for (size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
        double epsilon = cfg.epsilons[ei];
        std::vector<std::string> attributes = schema.sensitive;
        if (cfg.dynamic_ds.has_value()) {
          Rng subset_rng(DeriveSeed({cfg.seed, kSubsetTag,
                                     static_cast<uint64_t>(run),
                                     static_cast<uint64_t>(mechanism),
                                     static_cast<uint64_t>(scheme),
                                     static_cast<uint64_t>(ei)}));
          attributes = DrawAttributeSubset(schema, subset_rng,
                                           cfg.dynamic_ds->min,
                                           cfg.dynamic_ds->max);
        }
        std::vector<CategoricalDomain> domains;
        domains.reserve(attributes.size());
        for (const std::string& name : attributes) {
          domains.push_back(schema.Attribute(name));
        }
        PrivacyAllocation allocation = Allocate(scheme, epsilon, domains);
        EncodedMatrix sanitized;
        if (attributes.size() == schema.sensitive.size()) {
          sanitized =
              SanitizeTraining(train, allocation, mechanism, sanitize_seed);
        } else {
          // A drawn subset narrows the sensitive set for this cell; the
          // left-out attributes stay in the data as plain columns.
          Dataset narrowed = train;
          narrowed.schema.sensitive = attributes;
          sanitized = SanitizeTraining(narrowed, allocation, mechanism,
                                       sanitize_seed);
        }
        ClassifierParams params =
            TrainLogistic(sanitized.features, sanitized.rows, sanitized.cols,
                          sanitized.labels, cfg.hyper);
        MetricsRow row;
        row.run = run;
        row.mechanism = mechanism;
        row.allocation = scheme;
        row.epsilon = epsilon;
        row.d_s = static_cast<int>(attributes.size());
        std::tie(row.fairness, row.utility) =
            EvaluateOnTest(params, plain_test, cfg.hyper);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json config = json::parse(json_text);
  ExperimentConfig cfg;
  cfg.dataset_path = config.at("dataset").get<std::string>();
  cfg.schema_path = config.at("schema").get<std::string>();
  for (const json& name : config.at("mechanisms")) {
    cfg.mechanisms.push_back(ParseMechanism(name.get<std::string>()));
  }
  for (const json& name : config.at("allocations")) {
    cfg.allocations.push_back(
        ParseAllocationScheme(name.get<std::string>()));
  }
  if (config.contains("epsilons")) {
    cfg.epsilons.clear();
    for (const json& value : config.at("epsilons")) {
      cfg.epsilons.push_back(value.get<double>());
    }
  }
  if (config.contains("runs")) cfg.runs = config.at("runs").get<int>();
  if (config.contains("seed")) cfg.seed = config.at("seed").get<uint64_t>();
  if (config.contains("train_fraction")) {
    cfg.train_fraction = config.at("train_fraction").get<double>();
  }
  if (config.contains("dynamic_ds")) {
    const json& range = config.at("dynamic_ds");
    SubsetRange subset;
    if (range.contains("min")) subset.min = range.at("min").get<int>();
    if (range.contains("max")) subset.max = range.at("max").get<int>();
    cfg.dynamic_ds = subset;
  }
  if (config.contains("hyperparameters")) {
    const json& hyper = config.at("hyperparameters");
    if (hyper.contains("learning_rate")) {
      cfg.hyper.learning_rate = hyper.at("learning_rate").get<double>();
    }
    if (hyper.contains("l2")) cfg.hyper.l2 = hyper.at("l2").get<double>();
    if (hyper.contains("epochs")) {
      cfg.hyper.epochs = hyper.at("epochs").get<int>();
    }
    if (hyper.contains("threshold")) {
      cfg.hyper.threshold = hyper.at("threshold").get<double>();
    }
  }
  if (config.contains("output")) {
    cfg.output_dir = config.at("output").get<std::string>();
  }
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

void ValidateConfig(const ExperimentConfig& cfg,
                    const DatasetSchema& schema) {
  schema.Validate();
  if (cfg.mechanisms.empty()) {
    throw std::invalid_argument("config lists no mechanisms");
  }
  if (cfg.allocations.empty()) {
    throw std::invalid_argument("config lists no allocation schemes");
  }
  if (cfg.epsilons.empty()) {
    throw std::invalid_argument("config lists no epsilon values");
  }
  for (double epsilon : cfg.epsilons) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("epsilon values must be positive");
    }
  }
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (!(cfg.train_fraction > 0.0) || !(cfg.train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  if (cfg.hyper.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(cfg.hyper.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be > 0");
  }
  if (cfg.hyper.l2 < 0.0) throw std::invalid_argument("l2 must be >= 0");
  if (cfg.hyper.threshold < 0.0 || cfg.hyper.threshold > 1.0) {
    throw std::invalid_argument("threshold must be in [0, 1]");
  }
  if (cfg.dynamic_ds.has_value()) {
    const SubsetRange& range = *cfg.dynamic_ds;
    if (range.min < 1 || range.max < range.min) {
      throw std::invalid_argument("dynamic_ds range is invalid");
    }
    if (schema.sensitive.size() < static_cast<size_t>(range.max)) {
      throw std::invalid_argument(
          "dynamic_ds.max exceeds the number of sensitive attributes");
    }
  }
}

std::vector<std::string> DrawAttributeSubset(const DatasetSchema& schema,
                                             Rng& rng, int min_size,
                                             int max_size) {
  if (min_size < 1 || max_size < min_size) {
    throw std::invalid_argument("subset size range is invalid");
  }
  const std::vector<std::string>& sensitive = schema.sensitive;
  int available = static_cast<int>(sensitive.size());
  if (available < min_size) {
    throw std::invalid_argument("insufficient sensitive attributes");
  }
  int high = std::min(max_size, available);
  int size = min_size +
             static_cast<int>(rng.NextBelow(
                 static_cast<uint64_t>(high - min_size + 1)));

  std::vector<std::string> others;
  others.reserve(sensitive.size());
  for (const std::string& name : sensitive) {
    if (name != schema.protected_attribute) others.push_back(name);
  }
  // Partial Fisher-Yates: the first size-1 entries are a uniform sample of
  // the non-protected attributes; the protected attribute is always in.
  for (int i = 0; i + 1 < size; ++i) {
    size_t j = static_cast<size_t>(i) +
               static_cast<size_t>(rng.NextBelow(others.size() - i));
    std::swap(others[i], others[j]);
  }
  std::unordered_set<std::string> chosen(others.begin(),
                                         others.begin() + (size - 1));
  chosen.insert(schema.protected_attribute);
  std::vector<std::string> subset;
  subset.reserve(static_cast<size_t>(size));
  for (const std::string& name : sensitive) {
    if (chosen.count(name)) subset.push_back(name);
  }
  return subset;
}

std::vector<MetricsRow> RunExperiment(const ExperimentConfig& cfg,
                                      const Dataset& dataset, int jobs) {
  ValidateConfig(cfg, dataset.schema);
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  int runs = cfg.runs;
  std::vector<std::vector<MetricsRow>> per_run(
      static_cast<size_t>(runs));
  int workers = std::min(jobs, runs);
  if (workers <= 1) {
    for (int run = 0; run < runs; ++run) {
      per_run[static_cast<size_t>(run)] = ComputeRun(cfg, dataset, run);
    }
  } else {
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto work = [&] {
      for (;;) {
        int run = next.fetch_add(1);
        if (run >= runs) return;
        try {
          per_run[static_cast<size_t>(run)] = ComputeRun(cfg, dataset, run);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& thread : pool) thread.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<MetricsRow> rows;
  for (std::vector<MetricsRow>& part : per_run) {
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

std::vector<AggregateRow> Aggregate(const std::vector<MetricsRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to aggregate");

  struct Group {
    std::string mechanism;
    std::string allocation;
    std::string epsilon;
    size_t total = 0;
    std::vector<double> values[std::size(kMetricColumns)];
  };
  std::vector<Group> groups;
  std::unordered_map<std::string, size_t> index;
  for (const MetricsRow& row : rows) {
    std::string mechanism = MechanismLabel(row);
    std::string allocation = AllocationLabel(row);
    std::string epsilon = EpsilonLabel(row);
    std::string key = mechanism + '|' + allocation + '|' + epsilon;
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) {
      groups.push_back(Group{mechanism, allocation, epsilon, 0, {}});
    }
    Group& group = groups[it->second];
    ++group.total;
    for (size_t m = 0; m < std::size(kMetricColumns); ++m) {
      std::optional<double> value = kMetricColumns[m].get(row);
      if (value.has_value()) group.values[m].push_back(*value);
    }
  }

  std::vector<AggregateRow> result;
  result.reserve(groups.size() * std::size(kMetricColumns));
  for (const Group& group : groups) {
    for (size_t m = 0; m < std::size(kMetricColumns); ++m) {
      const std::vector<double>& values = group.values[m];
      AggregateRow out;
      out.mechanism = group.mechanism;
      out.allocation = group.allocation;
      out.epsilon = group.epsilon;
      out.metric = kMetricColumns[m].name;
      out.count = values.size();
      out.excluded = group.total - values.size();
      if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        out.mean = sum / static_cast<double>(values.size());
        double squares = 0.0;
        for (double v : values) {
          squares += (v - out.mean) * (v - out.mean);
        }
        out.sd = std::sqrt(squares / static_cast<double>(values.size()));
      }
      result.push_back(std::move(out));
    }
  }
  return result;
}

void WriteRowsCsv(const std::vector<MetricsRow>& rows,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "run,mechanism,allocation,epsilon,d_s";
  for (const MetricColumn& column : kMetricColumns) {
    out << ',' << column.name;
  }
  out << '\n';
  for (const MetricsRow& row : rows) {
    out << row.run << ',' << MechanismLabel(row) << ',' << AllocationLabel(row)
        << ',' << EpsilonLabel(row) << ',' << row.d_s;
    for (const MetricColumn& column : kMetricColumns) {
      out << ',' << FormatOptional(column.get(row));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void WriteAggregateCsv(const std::vector<AggregateRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "mechanism,allocation,epsilon,metric,mean,sd,count,excluded\n";
  for (const AggregateRow& row : rows) {
    out << row.mechanism << ',' << row.allocation << ',' << row.epsilon << ','
        << row.metric << ',';
    if (row.count > 0) {
      out << FormatDouble(row.mean) << ',' << FormatDouble(row.sd);
    } else {
      out << "NA,NA";
    }
    out << ',' << row.count << ',' << row.excluded << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void WritePlotTables(const std::vector<AggregateRow>& rows,
                     const std::string& directory) {
  std::filesystem::create_directories(directory);

  std::unordered_map<std::string, const AggregateRow*> lookup;
  std::vector<std::pair<std::string, std::string>> series;
  std::vector<std::pair<double, std::string>> epsilons;
  std::unordered_set<std::string> seen_series;
  std::unordered_set<std::string> seen_epsilons;
  for (const AggregateRow& row : rows) {
    lookup[row.mechanism + '|' + row.allocation + '|' + row.epsilon + '|' +
           row.metric] = &row;
    if (row.epsilon == "NonDP") continue;
    std::string series_key = row.mechanism + '|' + row.allocation;
    if (seen_series.insert(series_key).second) {
      series.emplace_back(row.mechanism, row.allocation);
    }
    if (seen_epsilons.insert(row.epsilon).second) {
      epsilons.emplace_back(std::strtod(row.epsilon.c_str(), nullptr),
                            row.epsilon);
    }
  }
  std::sort(epsilons.begin(), epsilons.end());

  for (const MetricColumn& column : kMetricColumns) {
    std::string path =
        directory + "/plot_" + std::string(column.name) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "epsilon";
    for (const auto& [mechanism, allocation] : series) {
      out << ',' << mechanism << '_' << allocation;
    }
    out << ",baseline\n";

    std::string baseline = "NA";
    auto base_it =
        lookup.find("none|none|NonDP|" + std::string(column.name));
    if (base_it != lookup.end() && base_it->second->count > 0) {
      baseline = FormatDouble(base_it->second->mean);
    }
    for (const auto& [value, label] : epsilons) {
      out << label;
      for (const auto& [mechanism, allocation] : series) {
        auto it = lookup.find(mechanism + '|' + allocation + '|' + label +
                              '|' + column.name);
        if (it != lookup.end() && it->second->count > 0) {
          out << ',' << FormatDouble(it->second->mean);
        } else {
          out << ",NA";
        }
      }
      out << ',' << baseline << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace ldpfair
