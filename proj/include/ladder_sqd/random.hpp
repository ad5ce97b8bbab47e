// Copyright 2026 The ladder-sqd Authors
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

#pragma once

#include <random>

#include "ladder_sqd/common.hpp"

namespace lsqd {

/// mt19937_64 with a platform-independent uniform double conversion, so runs
/// reproduce bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(u64 seed) : engine_(seed) {}

  u64 next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n) by rejection.
  u64 below(u64 n) {
    const u64 limit = ~u64{0} - (~u64{0} % n);
    u64 x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream seed for shard `index` of a run seeded with `seed`.
inline u64 shard_seed(u64 seed, u64 index) {
  u64 z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lsqd
