// Copyright 2026 The qss-trojan Authors
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

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace qss {

/// Counter-based pseudo-random stream.
///
/// Draw k of a stream seeded with s is splitmix64_mix(s + k * 0x9E3779B97F4A7C15),
/// so a stream is fully described by (seed, counter) and two streams with the
/// same seed produce the same sequence bit for bit on every platform. The
/// distribution helpers below are defined here rather than via <random>
/// distributions, whose output is implementation-defined.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Seed of the child stream with the given index:
  /// mix(mix(seed) ^ mix(index + 0xD1B54A32D192ED03)).
  static constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                             std::uint64_t index) noexcept {
    return mix(mix(seed) ^ mix(index + 0xD1B54A32D192ED03ULL));
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix(seed_ + counter_ * kGolden);
  }

  /// Independent stream for (seed, index); does not advance this stream.
  [[nodiscard]] RandomStream child(std::uint64_t index) const noexcept {
    return RandomStream(derive_seed(seed_, index));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  int bit() noexcept { return static_cast<int>((*this)() >> 63); }

  /// Uniform integer in [0, n) by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % n;
    }
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace qss
