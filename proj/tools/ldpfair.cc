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

// Command-line front end: run experiment sweeps, validate configs, solve the
// histogram threshold, and generate the bundled synthetic dataset.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ldpfair/budget.h"
#include "ldpfair/harness.h"
#include "ldpfair/mechanisms.h"
#include "ldpfair/pipeline.h"
#include "ldpfair/random.h"
#include "ldpfair/schema.h"

namespace {

int RunSweep(const std::string& config_path, const std::string& out_override,
             int jobs, bool plot_data) {
  ldpfair::ExperimentConfig cfg =
      ldpfair::LoadExperimentConfig(config_path);
  ldpfair::DatasetSchema schema = ldpfair::LoadSchema(cfg.schema_path);
  ldpfair::ValidateConfig(cfg, schema);
  ldpfair::LoadResult loaded = ldpfair::LoadCsv(cfg.dataset_path, schema);
  if (loaded.dropped_rows > 0) {
    std::cerr << "note: dropped " << loaded.dropped_rows
              << " invalid rows from " << cfg.dataset_path << "\n";
  }

  std::vector<ldpfair::MetricsRow> rows =
      ldpfair::RunExperiment(cfg, loaded.dataset, jobs);

  std::string out_dir = out_override.empty() ? cfg.output_dir : out_override;
  std::filesystem::create_directories(out_dir);
  ldpfair::WriteRowsCsv(rows, out_dir + "/rows.csv");
  std::vector<ldpfair::AggregateRow> aggregate = ldpfair::Aggregate(rows);
  ldpfair::WriteAggregateCsv(aggregate, out_dir + "/aggregate.csv");
  if (plot_data) {
    ldpfair::WritePlotTables(aggregate, out_dir);
  }
  std::cout << rows.size() << " rows -> " << out_dir << "/rows.csv\n";
  return 0;
}

int ValidateOnly(const std::string& config_path) {
  ldpfair::ExperimentConfig cfg =
      ldpfair::LoadExperimentConfig(config_path);
  ldpfair::DatasetSchema schema = ldpfair::LoadSchema(cfg.schema_path);
  ldpfair::ValidateConfig(cfg, schema);
  ldpfair::LoadResult loaded = ldpfair::LoadCsv(cfg.dataset_path, schema);
  std::cout << "config ok: " << loaded.dataset.size() << " rows ("
            << loaded.dropped_rows << " dropped), "
            << schema.sensitive.size() << " sensitive attributes\n";
  return 0;
}

int SolveTheta(double epsilon) {
  double theta = ldpfair::OptimizeTheta(epsilon);
  std::printf("%.12f\n", theta);
  return 0;
}

int GenerateSyntheticFiles(const std::string& out_dir, size_t rows,
                           uint64_t seed) {
  ldpfair::SyntheticSpec spec;
  spec.rows = rows;
  spec.seed = seed;
  ldpfair::Dataset dataset = ldpfair::GenerateSynthetic(spec);
  std::filesystem::create_directories(out_dir);
  ldpfair::WriteCsv(dataset, out_dir + "/synthetic.csv");
  ldpfair::SaveSchema(dataset.schema, out_dir + "/synthetic_schema.json");
  std::cout << "wrote " << dataset.size() << " rows to " << out_dir
            << "/synthetic.csv\n";
  return 0;
}

int EncodeMatrix(const std::string& schema_path,
                 const std::string& dataset_path,
                 const std::string& mechanism_name,
                 const std::string& scheme_name, double epsilon,
                 uint64_t seed, const std::string& out_dir) {
  ldpfair::DatasetSchema schema = ldpfair::LoadSchema(schema_path);
  ldpfair::LoadResult loaded = ldpfair::LoadCsv(dataset_path, schema);

  ldpfair::EncodedMatrix matrix;
  if (mechanism_name == "none") {
    matrix = ldpfair::EncodePlain(loaded.dataset);
  } else {
    ldpfair::MechanismKind kind = ldpfair::ParseMechanism(mechanism_name);
    std::vector<ldpfair::CategoricalDomain> domains;
    for (const std::string& name : schema.sensitive) {
      domains.push_back(schema.Attribute(name));
    }
    ldpfair::PrivacyAllocation allocation = ldpfair::Allocate(
        ldpfair::ParseAllocationScheme(scheme_name), epsilon, domains);
    matrix = ldpfair::SanitizeTraining(loaded.dataset, allocation, kind, seed);
  }
  std::filesystem::create_directories(out_dir);
  ldpfair::WriteSparseTriplets(matrix, out_dir + "/matrix.csv");
  ldpfair::WriteColumnMap(matrix, out_dir + "/columns.csv");
  std::cout << matrix.rows << " x " << matrix.cols << " -> " << out_dir
            << "/matrix.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDP sanitization, fairness, and utility experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  bool plot_data = false;
  CLI::App* run = app.add_subcommand("run", "Run a full experiment sweep");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--jobs", jobs, "Worker threads over runs")
      ->check(CLI::PositiveNumber);
  run->add_flag("--plot-data", plot_data,
                "Also write per-metric plot tables");

  std::string validate_config;
  CLI::App* validate =
      app.add_subcommand("validate", "Dry-run a config and its inputs");
  validate->add_option("--config", validate_config, "Experiment config (JSON)")
      ->required();

  double epsilon = 1.0;
  CLI::App* theta = app.add_subcommand(
      "theta", "Print the optimized histogram threshold for a budget");
  theta->add_option("--epsilon", epsilon, "Privacy budget")->required();

  std::string synth_dir = "data";
  uint64_t synth_seed = 1;
  size_t synth_rows = 6000;
  CLI::App* synth = app.add_subcommand(
      "synth", "Write the bundled synthetic dataset and its schema");
  synth->add_option("--out", synth_dir, "Output directory");
  synth->add_option("--rows", synth_rows, "Row count");
  synth->add_option("--seed", synth_seed, "Generator seed");

  std::string enc_schema;
  std::string enc_dataset;
  std::string enc_mechanism = "none";
  std::string enc_scheme = "uniform";
  double enc_epsilon = 1.0;
  uint64_t enc_seed = 42;
  std::string enc_out = "encoded";
  CLI::App* encode = app.add_subcommand(
      "encode", "Dump a (sanitized) binary feature matrix as sparse triplets");
  encode->add_option("--schema", enc_schema, "Schema (JSON)")->required();
  encode->add_option("--dataset", enc_dataset, "Dataset (CSV)")->required();
  encode->add_option("--mechanism", enc_mechanism,
                     "Mechanism name, or 'none' for plain encoding");
  encode->add_option("--allocation", enc_scheme, "uniform or k-based");
  encode->add_option("--epsilon", enc_epsilon, "Total privacy budget");
  encode->add_option("--seed", enc_seed, "Perturbation seed");
  encode->add_option("--out", enc_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return RunSweep(config_path, out_dir, jobs, plot_data);
    }
    if (validate->parsed()) {
      return ValidateOnly(validate_config);
    }
    if (theta->parsed()) {
      return SolveTheta(epsilon);
    }
    if (synth->parsed()) {
      return GenerateSyntheticFiles(synth_dir, synth_rows, synth_seed);
    }
    if (encode->parsed()) {
      return EncodeMatrix(enc_schema, enc_dataset, enc_mechanism, enc_scheme,
                          enc_epsilon, enc_seed, enc_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
