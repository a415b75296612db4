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

#include "levelset/rng.hpp"

#include "levelset/normal.hpp"

namespace levelset {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  for (const std::uint64_t key : keys) {
    h = mix64(h ^ mix64(key + kGolden));
    h += kGolden;
  }
  return h;
}

RandomStream::result_type RandomStream::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::uniform() noexcept {
  // 53 random bits, shifted half an ulp off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept { return normal_quantile(uniform()); }

std::size_t RandomStream::index(std::size_t n) noexcept {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t draw = (*this)();
  while (draw >= limit) draw = (*this)();
  return static_cast<std::size_t>(draw % bound);
}

}  // namespace levelset
