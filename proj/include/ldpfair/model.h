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

#ifndef LDPFAIR_MODEL_H_
#define LDPFAIR_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ldpfair {

struct Hyperparameters {
  double learning_rate = 0.1;
  double l2 = 1e-4;  // applied to the weights only, never the bias
  int epochs = 300;
  double threshold = 0.5;
};

struct ClassifierParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct LossGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// Mean cross-entropy over the batch plus (l2 / 2) * ||weights||^2.
double LogisticLoss(std::span<const uint8_t> features, size_t rows,
                    size_t cols, std::span<const uint8_t> labels,
                    const ClassifierParams& params, double l2);

LossGradient LogisticGradient(std::span<const uint8_t> features, size_t rows,
                              size_t cols, std::span<const uint8_t> labels,
                              const ClassifierParams& params, double l2);

// Full-batch gradient descent from zero-initialized parameters. When
// loss_trace is given it receives the loss before each update, epochs values
// in total.
ClassifierParams TrainLogistic(std::span<const uint8_t> features, size_t rows,
                               size_t cols, std::span<const uint8_t> labels,
                               const Hyperparameters& hyper,
                               std::vector<double>* loss_trace = nullptr);

std::vector<double> PredictProba(std::span<const uint8_t> features,
                                 size_t rows, size_t cols,
                                 const ClassifierParams& params);

// Predicts 1 when the probability strictly exceeds the threshold.
std::vector<uint8_t> Predict(std::span<const uint8_t> features, size_t rows,
                             size_t cols, const ClassifierParams& params,
                             double threshold = 0.5);

struct UtilityReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  double recall = 0.0;
  std::optional<double> auc;  // undefined when only one class is present
};

// Accuracy, F1, and recall from the hard predictions; AUC from the scores by
// the rank-sum identity with ties sharing their average rank. F1 and recall
// fall back to 0 when their denominators are empty.
UtilityReport ComputeUtility(std::span<const uint8_t> pred,
                             std::span<const double> scores,
                             std::span<const uint8_t> labels);

void SaveParams(const ClassifierParams& params, const std::string& path);
ClassifierParams LoadParams(const std::string& path);

}  // namespace ldpfair

#endif  // LDPFAIR_MODEL_H_
