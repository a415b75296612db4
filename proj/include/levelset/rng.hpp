// Copyright 2026 The levelset Authors. All Rights Reserved.
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
// =============================================================================

#ifndef LEVELSET_RNG_HPP
#define LEVELSET_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace levelset {

/// Derives a child seed from a parent seed and a path of integer keys, e.g.
/// derive_seed(master, {kNoiseStream, run, step, location}). Distinct key paths
/// give statistically independent streams, so the draws a task sees depend only
/// on its keys and never on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys) noexcept;

/// SplitMix64 stream. Every draw is a pure function of (seed, draw count), and
/// normals go through the library's own quantile function, so sequences are
/// identical across compilers and standard libraries.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  /// Standard normal draw by inversion.
  double normal() noexcept;

  /// Uniform integer in [0, n), unbiased. n must be positive.
  std::size_t index(std::size_t n) noexcept;

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by a RandomStream (std::shuffle's draw pattern
/// is implementation-defined).
template <typename T>
void shuffle(std::span<T> items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.index(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Stream tags for derive_seed.
inline constexpr std::uint64_t kSeedPointStream = 0x5eed;
inline constexpr std::uint64_t kNoiseStream = 0x4015e;
inline constexpr std::uint64_t kRandomAcquisitionStream = 0x7a4d;
inline constexpr std::uint64_t kMonteCarloStream = 0x3c3c;

}  // namespace levelset

#endif  // LEVELSET_RNG_HPP
