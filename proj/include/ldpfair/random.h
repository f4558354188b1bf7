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

#ifndef LDPFAIR_RANDOM_H_
#define LDPFAIR_RANDOM_H_

#include <cstdint>
#include <initializer_list>

namespace ldpfair {

// 64-bit finalizer (splitmix64). Bijective, well mixed; used both as the
// generator step and for seed derivation.
constexpr uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Folds an ordered list of values into one child seed. Order-sensitive:
// DeriveSeed({a, b}) != DeriveSeed({b, a}).
uint64_t DeriveSeed(std::initializer_list<uint64_t> parts);

// Deterministic generator over a splitmix64 stream. All distribution helpers
// consume the raw 64-bit stream directly so two builds given the same seed
// produce the same draws bit for bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t NextU64();

  // Uniform in [0, 1), 53-bit resolution.
  double NextDouble();

  // Uniform in [0, n). n must be positive.
  uint64_t NextBelow(uint64_t n);

  bool Bernoulli(double p);

  // Zero-mean Laplace via inverse CDF of a single uniform draw.
  double Laplace(double scale);

 private:
  uint64_t state_;
};

// Seeded hash of a value into [0, g). Deterministic in (seed, value);
// different seeds index different functions of the family.
uint32_t HashToRange(uint64_t seed, uint64_t value, uint32_t range);

}  // namespace ldpfair

#endif  // LDPFAIR_RANDOM_H_
