// Copyright 2026 The chainattack Authors
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

#ifndef CHAINATTACK_RNG_H_
#define CHAINATTACK_RNG_H_

#include <cstdint>
#include <random>

namespace chainattack {

// splitmix64 finaliser; used to derive independent stream seeds.
uint64_t SplitSeed(uint64_t seed, uint64_t stream);

// Seeded generator whose draws are identical on every platform. The standard
// distributions are implementation-defined, so the conversions live here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n must be positive.
  uint64_t Index(uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace chainattack

#endif  // CHAINATTACK_RNG_H_
