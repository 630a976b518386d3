// Copyright 2026 The polybrud Authors
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

#ifndef POLYBRUD_RNG_H_
#define POLYBRUD_RNG_H_

#include <cstdint>
#include <random>

namespace polybrud {

// Seedable, splittable random source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The conversions to doubles, Gaussians and bounded integers are
// implemented here rather than with <random> distributions, whose algorithms
// differ between standard libraries; that keeps CSV outputs reproducible
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent child stream identified by (seed, stream), mixed through
  // SplitMix64 so that neighbouring seeds do not produce correlated engines.
  static Rng Derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();

  // Uniform on [low, high).
  double Uniform(double low, double high) {
    return low + (high - low) * Uniform();
  }

  // Standard normal via Box-Muller (one variate per call, no caching).
  double Normal();

  // Uniform integer on [0, n), unbiased (rejection sampling). n must be > 0.
  std::uint64_t UniformInt(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace polybrud

#endif  // POLYBRUD_RNG_H_
