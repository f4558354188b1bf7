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

#include "ldpfair/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ldpfair {

namespace {

constexpr uint32_t kMinOlhCap = 1u << 16;
constexpr uint32_t kMaxEnumerableBits = 12;

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

void CheckDomain(uint32_t k) {
  if (k < 2) {
    throw std::invalid_argument("domain size k must be at least 2");
  }
}

void CheckValue(uint32_t value, uint32_t k) {
  if (value >= k) {
    throw std::invalid_argument("value outside domain");
  }
}

// Keep probability of GRR over a domain of size m, computed as
// 1 / (1 + (m-1) e^-eps) so it stays finite for large eps.
double KeepProbability(uint32_t m, double epsilon) {
  return 1.0 / (1.0 + (static_cast<double>(m) - 1.0) * std::exp(-epsilon));
}

uint32_t RoundHalfUp(double x) {
  return static_cast<uint32_t>(std::floor(x + 0.5));
}

// Samples `count` distinct values from [0, k) \ {excluded}, uniformly without
// replacement, via a partial Fisher-Yates pass.
std::vector<uint32_t> SampleOthers(uint32_t excluded, uint32_t k,
                                   uint32_t count, Rng& rng) {
  std::vector<uint32_t> pool;
  pool.reserve(k - 1);
  for (uint32_t u = 0; u < k; ++u) {
    if (u != excluded) {
      pool.push_back(u);
    }
  }
  std::vector<uint32_t> picked;
  picked.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t j = i + static_cast<uint32_t>(rng.NextBelow(pool.size() - i));
    std::swap(pool[i], pool[j]);
    picked.push_back(pool[i]);
  }
  return picked;
}

double BinomialCoefficient(uint32_t n, uint32_t r) {
  if (r > n) {
    return 0.0;
  }
  r = std::min(r, n - r);
  double result = 1.0;
  for (uint32_t i = 1; i <= r; ++i) {
    result = result * static_cast<double>(n - r + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace

std::string MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGrr:
      return "GRR";
    case MechanismKind::kBlh:
      return "BLH";
    case MechanismKind::kOlh:
      return "OLH";
    case MechanismKind::kRappor:
      return "RAPPOR";
    case MechanismKind::kOue:
      return "OUE";
    case MechanismKind::kSs:
      return "SS";
    case MechanismKind::kThe:
      return "THE";
  }
  throw std::invalid_argument("unknown mechanism kind");
}

MechanismKind ParseMechanism(const std::string& name) {
  for (MechanismKind kind : kAllMechanisms) {
    if (MechanismName(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown mechanism: " + name);
}

ValueReport GrrPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  CheckValue(value, k);
  // p = e^eps / (e^eps + k - 1)
  if (rng.Bernoulli(KeepProbability(k, epsilon))) {
    return {value};
  }
  uint32_t other = static_cast<uint32_t>(rng.NextBelow(k - 1));
  return {other < value ? other : other + 1};
}

HashReport BlhPerturb(uint32_t value, double epsilon, Rng& rng) {
  CheckEpsilon(epsilon);
  HashReport report;
  report.hash.seed = rng.NextU64();
  report.hash.range = 2;
  uint32_t b = HashToRange(report.hash.seed, value, 2);
  // p = e^eps / (e^eps + 1)
  report.bucket = rng.Bernoulli(KeepProbability(2, epsilon)) ? b : 1 - b;
  return report;
}

uint32_t OlhHashRange(uint32_t k, double epsilon) {
  CheckEpsilon(epsilon);
  // g = round_half_up(e^eps + 1). The cap keeps the range practical at large
  // eps, where e^eps overflows any integer type; shrinking g only coarsens
  // the channel, so the privacy bound is unaffected.
  const double cap = static_cast<double>(std::max(k, kMinOlhCap));
  const double raw = std::exp(epsilon) + 1.0;
  if (!(raw + 0.5 < cap)) {
    return std::max(k, kMinOlhCap);
  }
  return std::max<uint32_t>(2, RoundHalfUp(raw));
}

HashReport OlhPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng) {
  CheckEpsilon(epsilon);
  const uint32_t g = OlhHashRange(k, epsilon);
  HashReport report;
  report.hash.seed = rng.NextU64();
  report.hash.range = g;
  uint32_t b = HashToRange(report.hash.seed, value, g);
  // p = e^eps / (e^eps + g - 1)
  if (rng.Bernoulli(KeepProbability(g, epsilon))) {
    report.bucket = b;
  } else {
    uint32_t other = static_cast<uint32_t>(rng.NextBelow(g - 1));
    report.bucket = other < b ? other : other + 1;
  }
  return report;
}

std::vector<uint32_t> LhSupport(const HashReport& report, uint32_t k) {
  if (report.hash.range == 0 || report.bucket >= report.hash.range) {
    throw std::invalid_argument("malformed hash report");
  }
  std::vector<uint32_t> support;
  for (uint32_t u = 0; u < k; ++u) {
    if (HashToRange(report.hash.seed, u, report.hash.range) == report.bucket) {
      support.push_back(u);
    }
  }
  return support;
}

BitsReport RapporPerturb(uint32_t value, uint32_t k, double epsilon,
                         Rng& rng) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  CheckValue(value, k);
  // p = e^(eps/2) / (e^(eps/2) + 1), q = 1 - p.
  const double p = 1.0 / (1.0 + std::exp(-epsilon / 2.0));
  const double q = 1.0 - p;
  BitsReport report;
  report.bits.resize(k);
  for (uint32_t i = 0; i < k; ++i) {
    report.bits[i] = rng.Bernoulli(i == value ? p : q) ? 1 : 0;
  }
  return report;
}

BitsReport OuePerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  CheckValue(value, k);
  // p = 1/2 for the 1-bit, q = 1 / (e^eps + 1) for 0-bits.
  const double q = 1.0 / (1.0 + std::exp(epsilon));
  BitsReport report;
  report.bits.resize(k);
  for (uint32_t i = 0; i < k; ++i) {
    report.bits[i] = rng.Bernoulli(i == value ? 0.5 : q) ? 1 : 0;
  }
  return report;
}

uint32_t SsSubsetSize(uint32_t k, double epsilon) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  // omega = round_half_up(k / (e^eps + 1)), clamped to [1, k-1]: the formula
  // reaches 0 for large eps and k for tiny eps.
  uint32_t omega = RoundHalfUp(static_cast<double>(k) /
                               (std::exp(epsilon) + 1.0));
  return std::clamp<uint32_t>(omega, 1, k - 1);
}

SubsetReport SsPerturb(uint32_t value, uint32_t k, double epsilon, Rng& rng) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  CheckValue(value, k);
  const uint32_t omega = SsSubsetSize(k, epsilon);
  // p = omega e^eps / (omega e^eps + k - omega), evaluated in a form that
  // stays finite at large eps.
  const double p =
      1.0 / (1.0 + (static_cast<double>(k - omega) / omega) *
                       std::exp(-epsilon));
  SubsetReport report;
  if (rng.Bernoulli(p)) {
    report.members = SampleOthers(value, k, omega - 1, rng);
    report.members.push_back(value);
  } else {
    report.members = SampleOthers(value, k, omega, rng);
  }
  std::sort(report.members.begin(), report.members.end());
  return report;
}

HistogramReport ThePerturb(uint32_t value, uint32_t k, double epsilon,
                           Rng& rng) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  CheckValue(value, k);
  HistogramReport report;
  report.values.resize(k);
  const double scale = 2.0 / epsilon;
  for (uint32_t i = 0; i < k; ++i) {
    report.values[i] = (i == value ? 1.0 : 0.0) + rng.Laplace(scale);
  }
  return report;
}

std::vector<uint32_t> TheSupport(const HistogramReport& report, double theta) {
  if (!(theta > 0.5 && theta < 1.0)) {
    throw std::invalid_argument("theta must lie in (0.5, 1)");
  }
  std::vector<uint32_t> support;
  for (uint32_t i = 0; i < report.values.size(); ++i) {
    if (report.values[i] > theta) {
      support.push_back(i);
    }
  }
  return support;
}

double TheVarianceObjective(double theta, double epsilon) {
  const double numerator = 2.0 * std::exp(epsilon * theta / 2.0) - 1.0;
  const double base = 1.0 + std::exp(epsilon * (theta - 0.5)) -
                      2.0 * std::exp(epsilon * theta / 2.0);
  return numerator / (base * base);
}

double OptimizeTheta(double epsilon) {
  CheckEpsilon(epsilon);
  // Coarse scan to bracket the minimum, then golden-section refinement.
  constexpr int kScanPoints = 512;
  constexpr double kLo = 0.5;
  constexpr double kHi = 1.0;
  const double step = (kHi - kLo) / (kScanPoints + 1);
  int best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kScanPoints; ++i) {
    double value = TheVarianceObjective(kLo + i * step, epsilon);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = kLo + (best - 1) * step;
  double b = kLo + (best + 1) * step;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = TheVarianceObjective(x1, epsilon);
  double f2 = TheVarianceObjective(x2, epsilon);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = TheVarianceObjective(x1, epsilon);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = TheVarianceObjective(x2, epsilon);
    }
  }
  double theta = 0.5 * (a + b);
  // Stay strictly inside the open interval.
  return std::clamp(theta, std::nextafter(0.5, 1.0), std::nextafter(1.0, 0.5));
}

Report Perturb(MechanismKind kind, uint32_t value, uint32_t k, double epsilon,
               Rng& rng) {
  switch (kind) {
    case MechanismKind::kGrr:
      return GrrPerturb(value, k, epsilon, rng);
    case MechanismKind::kBlh:
      return BlhPerturb(value, epsilon, rng);
    case MechanismKind::kOlh:
      return OlhPerturb(value, k, epsilon, rng);
    case MechanismKind::kRappor:
      return RapporPerturb(value, k, epsilon, rng);
    case MechanismKind::kOue:
      return OuePerturb(value, k, epsilon, rng);
    case MechanismKind::kSs:
      return SsPerturb(value, k, epsilon, rng);
    case MechanismKind::kThe:
      return ThePerturb(value, k, epsilon, rng);
  }
  throw std::invalid_argument("unknown mechanism kind");
}

double TrueSupportProbability(MechanismKind kind, uint32_t k, double epsilon,
                              std::optional<double> theta) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  switch (kind) {
    case MechanismKind::kGrr:
      return KeepProbability(k, epsilon);
    case MechanismKind::kBlh:
      return KeepProbability(2, epsilon);
    case MechanismKind::kOlh:
      return KeepProbability(OlhHashRange(k, epsilon), epsilon);
    case MechanismKind::kRappor:
      return 1.0 / (1.0 + std::exp(-epsilon / 2.0));
    case MechanismKind::kOue:
      return 0.5;
    case MechanismKind::kSs: {
      const uint32_t omega = SsSubsetSize(k, epsilon);
      return 1.0 / (1.0 + (static_cast<double>(k - omega) / omega) *
                              std::exp(-epsilon));
    }
    case MechanismKind::kThe: {
      const double t = theta.value_or(OptimizeTheta(epsilon));
      // Pr[1 + Lap(2/eps) > theta] with theta < 1: Laplace lower tail.
      return 1.0 - 0.5 * std::exp((t - 1.0) * epsilon / 2.0);
    }
  }
  throw std::invalid_argument("unknown mechanism kind");
}

double ChannelMatrix::MaxPrivacyRatio() const {
  double worst = 0.0;
  for (size_t z = 0; z < num_outputs; ++z) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (uint32_t v = 0; v < k; ++v) {
      lo = std::min(lo, At(v, z));
      hi = std::max(hi, At(v, z));
    }
    worst = std::max(worst, lo > 0.0
                                ? hi / lo
                                : std::numeric_limits<double>::infinity());
  }
  return worst;
}

ChannelMatrix BuildChannelMatrix(MechanismKind kind, uint32_t k,
                                 double epsilon) {
  CheckDomain(k);
  CheckEpsilon(epsilon);
  ChannelMatrix matrix;
  matrix.kind = kind;
  matrix.epsilon = epsilon;
  matrix.k = k;
  switch (kind) {
    case MechanismKind::kGrr: {
      const double p = KeepProbability(k, epsilon);
      const double q = (1.0 - p) / (k - 1);
      matrix.num_outputs = k;
      matrix.probs.assign(static_cast<size_t>(k) * k, q);
      for (uint32_t v = 0; v < k; ++v) {
        matrix.probs[static_cast<size_t>(v) * k + v] = p;
      }
      return matrix;
    }
    case MechanismKind::kRappor:
    case MechanismKind::kOue: {
      if (k > kMaxEnumerableBits) {
        throw std::invalid_argument(
            "bit-vector channel enumeration requires k <= 12");
      }
      double p, q;
      if (kind == MechanismKind::kRappor) {
        p = 1.0 / (1.0 + std::exp(-epsilon / 2.0));
        q = 1.0 - p;
      } else {
        p = 0.5;
        q = 1.0 / (1.0 + std::exp(epsilon));
      }
      // Outputs are all 2^k bit vectors; bit i of the output index encodes
      // bit i of the vector. Bits are independent, so the probability is a
      // product over coordinates.
      matrix.num_outputs = size_t{1} << k;
      matrix.probs.resize(static_cast<size_t>(k) * matrix.num_outputs);
      for (uint32_t v = 0; v < k; ++v) {
        for (size_t z = 0; z < matrix.num_outputs; ++z) {
          double prob = 1.0;
          for (uint32_t i = 0; i < k; ++i) {
            const bool set = (z >> i) & 1;
            const double on = i == v ? p : q;
            prob *= set ? on : 1.0 - on;
          }
          matrix.probs[v * matrix.num_outputs + z] = prob;
        }
      }
      return matrix;
    }
    case MechanismKind::kSs: {
      const uint32_t omega = SsSubsetSize(k, epsilon);
      const double p =
          1.0 / (1.0 + (static_cast<double>(k - omega) / omega) *
                           std::exp(-epsilon));
      // Enumerate all omega-subsets. Given inclusion of the true value the
      // remaining members are uniform over C(k-1, omega-1) choices; given
      // exclusion, uniform over C(k-1, omega).
      const double with_v = p / BinomialCoefficient(k - 1, omega - 1);
      const double without_v = (1.0 - p) / BinomialCoefficient(k - 1, omega);
      std::vector<uint32_t> combo(omega);
      std::iota(combo.begin(), combo.end(), 0);
      std::vector<std::vector<uint32_t>> subsets;
      while (true) {
        subsets.push_back(combo);
        int i = static_cast<int>(omega) - 1;
        while (i >= 0 && combo[i] == k - omega + i) {
          --i;
        }
        if (i < 0) {
          break;
        }
        ++combo[i];
        for (uint32_t j = i + 1; j < omega; ++j) {
          combo[j] = combo[j - 1] + 1;
        }
      }
      matrix.num_outputs = subsets.size();
      matrix.probs.resize(static_cast<size_t>(k) * matrix.num_outputs);
      for (uint32_t v = 0; v < k; ++v) {
        for (size_t z = 0; z < subsets.size(); ++z) {
          const bool contains =
              std::binary_search(subsets[z].begin(), subsets[z].end(), v);
          matrix.probs[v * matrix.num_outputs + z] =
              contains ? with_v : without_v;
        }
      }
      return matrix;
    }
    case MechanismKind::kBlh:
    case MechanismKind::kOlh:
    case MechanismKind::kThe:
      throw std::invalid_argument(
          "channel matrix unsupported for " + MechanismName(kind) +
          ": output space is not enumerable");
  }
  throw std::invalid_argument("unknown mechanism kind");
}

}  // namespace ldpfair
