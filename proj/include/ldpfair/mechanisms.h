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

#ifndef LDPFAIR_MECHANISMS_H_
#define LDPFAIR_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldpfair/random.h"

namespace ldpfair {

// The seven client-side frequency-oracle mechanisms.
enum class MechanismKind { kGrr, kBlh, kOlh, kRappor, kOue, kSs, kThe };

constexpr MechanismKind kAllMechanisms[] = {
    MechanismKind::kGrr, MechanismKind::kBlh, MechanismKind::kOlh,
    MechanismKind::kRappor, MechanismKind::kOue, MechanismKind::kSs,
    MechanismKind::kThe};

std::string MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(const std::string& name);  // throws on unknown

// One member of the seeded hash family: H(v) = HashToRange(seed, v, range).
struct HashFunctionSpec {
  uint64_t seed = 0;
  uint32_t range = 2;
};

// Per-mechanism report payloads.
struct ValueReport {
  uint32_t value = 0;  // perturbed category index in [0, k)
};
struct HashReport {
  HashFunctionSpec hash;
  uint32_t bucket = 0;  // perturbed hash bucket in [0, range)
};
struct BitsReport {
  std::vector<uint8_t> bits;  // length k, each 0/1
};
struct SubsetReport {
  std::vector<uint32_t> members;  // sorted, |members| = omega
};
struct HistogramReport {
  std::vector<double> values;  // length k, one-hot plus Laplace noise
};

using Report = std::variant<ValueReport, HashReport, BitsReport, SubsetReport,
                            HistogramReport>;

// ---------------------------------------------------------------------------
// Client-side perturbation. All operations require epsilon > 0 and (where a
// domain is involved) k >= 2, and are deterministic given the generator state.
// ---------------------------------------------------------------------------

// Keeps the true value with p = e^eps / (e^eps + k - 1), otherwise emits one
// of the k-1 other values uniformly.
ValueReport GrrPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng);

// Draws a fresh binary hash function, then flips the hashed bit with
// probability 1 / (e^eps + 1). The report carries the hash seed.
HashReport BlhPerturb(uint32_t value, double epsilon, Rng& rng);

// Hash range g = round_half_up(e^eps + 1), capped at max(k, 2^16).
uint32_t OlhHashRange(uint32_t k, double epsilon);

// As BLH but over [0, g): keeps the hashed bucket with
// p = e^eps / (e^eps + g - 1), otherwise uniform over the other buckets.
HashReport OlhPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng);

// Domain values hashing to the reported bucket: { u in [0,k) : H(u) = z }.
std::vector<uint32_t> LhSupport(const HashReport& report, uint32_t k);

// Symmetric unary encoding: 1-bits stay 1 with p = e^(eps/2)/(e^(eps/2)+1),
// 0-bits become 1 with q = 1 - p. Bits are perturbed independently.
BitsReport RapporPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng);

// Asymmetric unary encoding: the 1-bit stays with p = 1/2, 0-bits flip on
// with q = 1/(e^eps + 1).
BitsReport OuePerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng);

// Variance-optimal subset size round_half_up(k / (e^eps + 1)), clamped to
// [1, k-1] so the mechanism stays well-defined at both budget extremes.
uint32_t SsSubsetSize(uint32_t k, double epsilon);

// Reports a size-omega subset; the true value joins it with
// p = omega*e^eps / (omega*e^eps + k - omega), and the rest is filled
// uniformly without replacement from the other k-1 values.
SubsetReport SsPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng);

// One-hot histogram of the value plus independent Laplace(2/eps) noise per
// coordinate (two inputs differ by L1 distance 2).
HistogramReport ThePerturb(uint32_t value, uint32_t k, double epsilon,
                           Rng& rng);

// Coordinates strictly above the threshold; may be empty.
// theta must lie in (0.5, 1).
std::vector<uint32_t> TheSupport(const HistogramReport& report, double theta);

// The thresholding variance objective minimized over theta in (0.5, 1):
//   (2 e^(eps*theta/2) - 1) / (1 + e^(eps*(theta - 1/2)) - 2 e^(eps*theta/2))^2
double TheVarianceObjective(double theta, double epsilon);

// Argmin of TheVarianceObjective over (0.5, 1), within 1e-4 of the true
// minimizer.
double OptimizeTheta(double epsilon);

// Uniform dispatcher used by the sanitization pipeline.
Report Perturb(MechanismKind kind, uint32_t value, uint32_t k, double epsilon,
               Rng& rng);

// Closed-form probability that the true value lands in the homogeneous
// encoded support of its own report. For THE the threshold is the optimized
// one unless given explicitly.
double TrueSupportProbability(MechanismKind kind, uint32_t k, double epsilon,
                              std::optional<double> theta = std::nullopt);

// ---------------------------------------------------------------------------
// Exact channel oracle for the enumerable mechanisms (GRR, RAPPOR, OUE, SS):
// the full output distribution per input value, used to certify the privacy
// bound on small domains. Bit-vector kinds require k <= 12.
// ---------------------------------------------------------------------------

struct ChannelMatrix {
  MechanismKind kind;
  double epsilon = 0.0;
  uint32_t k = 0;
  size_t num_outputs = 0;
  std::vector<double> probs;  // k rows * num_outputs, row-major

  double At(uint32_t input, size_t output) const {
    return probs[input * num_outputs + output];
  }

  // max over outputs z and input pairs (v1, v2) of Pr[z|v1] / Pr[z|v2].
  double MaxPrivacyRatio() const;
};

ChannelMatrix BuildChannelMatrix(MechanismKind kind, uint32_t k,
                                 double epsilon);

}  // namespace ldpfair

#endif  // LDPFAIR_MECHANISMS_H_
