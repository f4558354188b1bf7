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

#include "ldpfair/model.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ldpfair {
namespace {

void CheckShape(std::span<const uint8_t> features, size_t rows, size_t cols,
                std::span<const uint8_t> labels) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty matrix");
  if (features.size() != rows * cols) {
    throw std::invalid_argument("feature buffer does not match shape");
  }
  if (labels.size() != rows) {
    throw std::invalid_argument("label count does not match rows");
  }
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double Score(std::span<const uint8_t> features, size_t cols, size_t row,
             const ClassifierParams& params) {
  const uint8_t* x = features.data() + row * cols;
  double z = params.bias;
  for (size_t c = 0; c < cols; ++c) {
    if (x[c]) z += params.weights[c];
  }
  return z;
}

}  // namespace

double LogisticLoss(std::span<const uint8_t> features, size_t rows,
                    size_t cols, std::span<const uint8_t> labels,
                    const ClassifierParams& params, double l2) {
  CheckShape(features, rows, cols, labels);
  double total = 0.0;
  for (size_t i = 0; i < rows; ++i) {
    double z = Score(features, cols, i, params);
    double y = labels[i] ? 1.0 : 0.0;
    // log(1 + e^-z) and log(1 + e^z) in one overflow-safe expression.
    total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  double penalty = 0.0;
  for (double w : params.weights) penalty += w * w;
  return total / static_cast<double>(rows) + 0.5 * l2 * penalty;
}

LossGradient LogisticGradient(std::span<const uint8_t> features, size_t rows,
                              size_t cols, std::span<const uint8_t> labels,
                              const ClassifierParams& params, double l2) {
  CheckShape(features, rows, cols, labels);
  LossGradient grad;
  grad.weights.assign(cols, 0.0);
  for (size_t i = 0; i < rows; ++i) {
    double residual =
        Sigmoid(Score(features, cols, i, params)) - (labels[i] ? 1.0 : 0.0);
    const uint8_t* x = features.data() + i * cols;
    for (size_t c = 0; c < cols; ++c) {
      if (x[c]) grad.weights[c] += residual;
    }
    grad.bias += residual;
  }
  double inv_rows = 1.0 / static_cast<double>(rows);
  for (size_t c = 0; c < cols; ++c) {
    grad.weights[c] = grad.weights[c] * inv_rows + l2 * params.weights[c];
  }
  grad.bias *= inv_rows;
  return grad;
}

ClassifierParams TrainLogistic(std::span<const uint8_t> features, size_t rows,
                               size_t cols, std::span<const uint8_t> labels,
                               const Hyperparameters& hyper,
                               std::vector<double>* loss_trace) {
  CheckShape(features, rows, cols, labels);
  if (hyper.epochs <= 0) throw std::invalid_argument("epochs must be > 0");
  if (hyper.learning_rate <= 0.0) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  size_t positives = 0;
  for (uint8_t y : labels) {
    if (y) ++positives;
  }
  if (positives == 0 || positives == rows) {
    throw std::invalid_argument("training labels contain a single class");
  }
  ClassifierParams params;
  params.weights.assign(cols, 0.0);
  if (loss_trace != nullptr) {
    loss_trace->clear();
    loss_trace->reserve(static_cast<size_t>(hyper.epochs));
  }
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    if (loss_trace != nullptr) {
      loss_trace->push_back(
          LogisticLoss(features, rows, cols, labels, params, hyper.l2));
    }
    LossGradient grad =
        LogisticGradient(features, rows, cols, labels, params, hyper.l2);
    for (size_t c = 0; c < cols; ++c) {
      params.weights[c] -= hyper.learning_rate * grad.weights[c];
    }
    params.bias -= hyper.learning_rate * grad.bias;
  }
  if (!std::isfinite(
          LogisticLoss(features, rows, cols, labels, params, hyper.l2))) {
    throw std::runtime_error("training diverged to a non-finite loss");
  }
  return params;
}

std::vector<double> PredictProba(std::span<const uint8_t> features,
                                 size_t rows, size_t cols,
                                 const ClassifierParams& params) {
  if (features.size() != rows * cols) {
    throw std::invalid_argument("feature buffer does not match shape");
  }
  if (params.weights.size() != cols) {
    throw std::invalid_argument("parameter size does not match columns");
  }
  std::vector<double> proba(rows);
  for (size_t i = 0; i < rows; ++i) {
    proba[i] = Sigmoid(Score(features, cols, i, params));
  }
  return proba;
}

std::vector<uint8_t> Predict(std::span<const uint8_t> features, size_t rows,
                             size_t cols, const ClassifierParams& params,
                             double threshold) {
  std::vector<double> proba = PredictProba(features, rows, cols, params);
  std::vector<uint8_t> pred(rows);
  for (size_t i = 0; i < rows; ++i) {
    pred[i] = proba[i] > threshold ? 1 : 0;
  }
  return pred;
}

UtilityReport ComputeUtility(std::span<const uint8_t> pred,
                             std::span<const double> scores,
                             std::span<const uint8_t> labels) {
  if (pred.size() != labels.size() || scores.size() != labels.size()) {
    throw std::invalid_argument("utility input size mismatch");
  }
  if (labels.empty()) throw std::invalid_argument("empty input");
  size_t n = labels.size();
  size_t tp = 0, fp = 0, fn = 0, correct = 0, positives = 0;
  for (size_t i = 0; i < n; ++i) {
    bool y = labels[i] != 0;
    bool p = pred[i] != 0;
    if (y) ++positives;
    if (p == y) ++correct;
    if (p && y) ++tp;
    if (p && !y) ++fp;
    if (!p && y) ++fn;
  }
  UtilityReport report;
  report.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  report.recall =
      tp + fn == 0 ? 0.0
                   : static_cast<double>(tp) / static_cast<double>(tp + fn);
  double precision =
      tp + fp == 0 ? 0.0
                   : static_cast<double>(tp) / static_cast<double>(tp + fp);
  report.f1 = precision + report.recall == 0.0
                  ? 0.0
                  : 2.0 * precision * report.recall /
                        (precision + report.recall);

  size_t negatives = n - positives;
  if (positives > 0 && negatives > 0) {
    // Rank-sum identity: AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos n_neg)
    // where R_pos sums the ascending ranks of the positive scores and tied
    // scores share the average of their rank range.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });
    double rank_sum = 0.0;
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
      double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
      for (size_t t = i; t <= j; ++t) {
        if (labels[order[t]]) rank_sum += avg_rank;
      }
      i = j + 1;
    }
    double np = static_cast<double>(positives);
    double nn = static_cast<double>(negatives);
    report.auc = (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
  }
  return report;
}

void SaveParams(const ClassifierParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", params.bias);
  out << params.weights.size() << '\n' << buffer << '\n';
  for (double w : params.weights) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", w);
    out << buffer << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ClassifierParams LoadParams(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  size_t count = 0;
  ClassifierParams params;
  if (!(in >> count >> params.bias)) {
    throw std::runtime_error("malformed parameter file: " + path);
  }
  params.weights.resize(count);
  for (size_t i = 0; i < count; ++i) {
    if (!(in >> params.weights[i])) {
      throw std::runtime_error("malformed parameter file: " + path);
    }
  }
  return params;
}

}  // namespace ldpfair
