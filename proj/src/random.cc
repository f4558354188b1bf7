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

#include "ldpfair/random.h"

#include <cmath>
#include <stdexcept>

namespace ldpfair {

namespace {
constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;
constexpr uint64_t kSeedSalt = 0x8e9c4f1a2b3d5e77ull;
}  // namespace

uint64_t DeriveSeed(std::initializer_list<uint64_t> parts) {
  uint64_t h = kSeedSalt;
  for (uint64_t p : parts) {
    h = Mix64(h ^ Mix64(p + kGolden));
  }
  return h;
}

uint64_t Rng::NextU64() {
  state_ += kGolden;
  return Mix64(state_);
}

double Rng::NextDouble() {
  // Top 53 bits -> [0, 1).
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::NextBelow(uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("Rng::NextBelow: n must be positive");
  }
  // Multiply-shift range reduction; bias is O(n / 2^64).
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(NextU64()) * n) >> 64);
}

bool Rng::Bernoulli(double p) { return NextDouble() < p; }

double Rng::Laplace(double scale) {
  double u = NextDouble();
  while (u == 0.0) {
    u = NextDouble();
  }
  // Inverse CDF: F^-1(u) = scale * ln(2u) for u < 1/2, -scale * ln(2(1-u))
  // otherwise. u < 1 always holds for 53-bit doubles.
  if (u < 0.5) {
    return scale * std::log(2.0 * u);
  }
  return -scale * std::log(2.0 * (1.0 - u));
}

uint32_t HashToRange(uint64_t seed, uint64_t value, uint32_t range) {
  if (range == 0) {
    throw std::invalid_argument("HashToRange: range must be positive");
  }
  uint64_t h = Mix64(seed ^ Mix64(value + kGolden));
  return static_cast<uint32_t>(
      (static_cast<unsigned __int128>(h) * range) >> 64);
}

}  // namespace ldpfair
