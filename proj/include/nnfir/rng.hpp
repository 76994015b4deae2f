/*******************************************************************************
 * Copyright 2026 the nnfir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#ifndef NNFIR_RNG_HPP
#define NNFIR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace nnfir {

/// Deterministic substream generator built on splitmix64. Substreams are
/// derived from a root seed and up to three stream labels (scale index,
/// replication index, purpose) by chained finalizer mixing, so a replication
/// draws the same numbers whether the harness runs serially or in parallel
/// and in whatever order tasks are scheduled.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : state_(key) {}

  /// key = mix(mix(mix(mix(seed) ^ a) ^ b) ^ c)
  static RngStream derive(std::uint64_t root_seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t k = mix64(root_seed);
    k = mix64(k ^ a);
    k = mix64(k ^ b);
    k = mix64(k ^ c);
    return RngStream(k);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + next_uniform01() * (hi - lo);
  }

  /// Standard normal via Box-Muller; the second value of each pair is
  /// cached, so the stream consumes two words per two normals.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace nnfir

#endif  // NNFIR_RNG_HPP
