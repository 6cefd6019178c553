// Copyright 2026 The dpauction Authors
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

// Seeded randomness with a fixed, platform-independent output stream.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the C++
// standard. The standard's distribution adaptors are implementation-defined,
// so real-valued draws are derived here from the raw 64-bit output:
// the top 53 bits scaled by 2^-53 give a uniform double in [0, 1).

#ifndef DPAUCTION_RANDOM_H_
#define DPAUCTION_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpauction {

// SplitMix64 finalizer. Used to decorrelate derived seeds.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the `index`-th child stream of `base`. Any single trial of a sweep
// can be replayed from (base, index) alone.
constexpr uint64_t DeriveSeed(uint64_t base, uint64_t index) {
  return SplitMix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi]; returns lo when the interval is degenerate.
  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * UniformDouble();
  }

  // Uniform in {0, ..., n - 1}; n must be positive.
  uint64_t UniformIndex(uint64_t n) {
    const auto i = static_cast<uint64_t>(UniformDouble() * n);
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpauction

#endif  // DPAUCTION_RANDOM_H_
