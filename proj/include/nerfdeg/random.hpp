// Copyright 2026 The nerfdeg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace nerfdeg {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless keyed hash: the counter-th 64-bit word of the stream named by `key`.
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(mix64(key) + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Derives an independent child seed, e.g. per sample or per stage.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index = 0) noexcept {
  return counter_hash(counter_hash(seed, tag), index);
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform in the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate for element `index` of the stream `key`.
///
/// Box-Muller over two hashed uniforms. Depends only on (key, index), so a
/// noise plane can be generated in any traversal order or in parallel.
inline double counter_normal(std::uint64_t key, std::uint64_t index) noexcept {
  const double u1 = to_open_unit(counter_hash(key, 2 * index));
  const double u2 = to_unit(counter_hash(key, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Sequential generator over a counter-hash stream.
///
/// Distributions are implemented here rather than with <random> so that
/// sampled values are identical across standard library implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept { return counter_hash(key_, counter_++); }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * to_unit(next_u64()); }

  /// Uniform in the open interval (lo, hi).
  double uniform_open(double lo, double hi) noexcept {
    return lo + (hi - lo) * to_open_unit(next_u64());
  }

  /// Uniform in (lo, hi].
  double uniform_left_open(double lo, double hi) noexcept {
    return hi - (hi - lo) * to_unit(next_u64());
  }

  /// Uniform integer in [lo, hi]. Uses rejection so the result is unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool bernoulli(double p) noexcept { return to_unit(next_u64()) < p; }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nerfdeg
