// Copyright 2026 The wscolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <vector>

#include "wscolor/common.hpp"

namespace wsc {

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline u64 mix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Keyed PRF: fold an arbitrary-length key of 64-bit words into one value.
// Per-vertex shifts and per-node permutations are derived from (seed, key...)
// so they are reproducible without storing them.
class KeyedPrf {
 public:
  explicit KeyedPrf(u64 seed) : seed_(seed) {}

  u64 seed() const { return seed_; }

  u64 hash(std::initializer_list<u64> key) const {
    u64 h = mix64(seed_ ^ 0x6d6f7a61696b61ULL);
    for (u64 w : key) h = mix64(h ^ w);
    return h;
  }

  // Uniform draw in [0, bound) via the fixed-point multiply trick.
  u64 uniform(std::initializer_list<u64> key, u64 bound) const {
    WSC_CHECK_MSG(bound > 0, "uniform bound must be positive");
    return u64((u128(hash(key)) * bound) >> 64);
  }

  // mt19937_64 stream keyed off this PRF, for longer random sequences
  // (permutations, bucket shuffles) tied to a structural key.
  std::mt19937_64 stream(std::initializer_list<u64> key) const {
    return std::mt19937_64(hash(key));
  }

 private:
  u64 seed_;
};

// Fisher-Yates permutation of `items`, seeded by `rng`. Draws are mapped to
// [0, i) with the fixed-point multiply trick rather than
// std::uniform_int_distribution, whose mapping is implementation-defined;
// mt19937_64 output itself is pinned by the standard, so the permutation is
// bit-stable across platforms.
template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = std::size_t((u128(rng()) * i) >> 64);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace wsc
