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

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wscolor/color_id.hpp"
#include "wscolor/forest.hpp"
#include "wscolor/prng.hpp"

namespace wsc {

// One class edge: u is the list side (degree exponent l), v is the forest
// side (degree exponent r). `v_batch_deg` is v's degree in the full level
// batch, which defines its class membership; the class subgraph alone can
// undercount it.
struct LowEdge {
  u64 u = 0;
  u64 v = 0;
  u64 v_batch_deg = 0;
};

// Tentative-color index for the i-th class neighbor of u (1-based), under a
// leaf palette already used `cnt` times before this batch and a per-vertex
// shift `r_shift`. Wraps inside the per-leaf package of 25 * 2^{l+r+2}.
u64 low_kappa(u32 l, u32 r, u64 cnt, u64 r_shift, u64 i);

// Randomized scheme for a low degree class (l, r), l <= r after the caller's
// role normalization. Every batch, each right vertex picks a scheduling
// vector and receives the current leaf palette of that vector's forest; a
// palette whose sub-package index recurs on a marked sibling of the leaf path
// is unusable for that vertex, and its edges stay uncolored. Left vertices
// spread their neighbors across a palette by the kappa rule; right-side
// duplicates keep the earliest edge. Classes whose right band is at most the
// vector floor skip all of this and first-fit a fresh flat palette per batch.
class LowScheme {
 public:
  struct Stats {
    u64 edges = 0;
    u64 colored = 0;
    u64 bot_dead_end = 0;  // no scheduling vector had room
    u64 bot_palette = 0;   // leaf palette unusable around v
    u64 bot_dedup = 0;     // tentative color already taken around v
  };

  LowScheme(u64 delta_pow2, long double epsilon, u32 l, u32 r, u64 batch_bound,
            KeyedPrf prf);

  // True when the class colors from per-batch flat palettes instead of
  // forests: the right degree band 2^r does not exceed the vector floor.
  bool uses_shortcut() const { return shortcut_; }
  Scheme scheme() const {
    return shortcut_ ? Scheme::kShortcut : Scheme::kRandLow;
  }

  u32 l() const { return l_; }
  u32 r() const { return r_; }
  u64 floor_value() const { return forests_.floor_value(); }
  // Colors in one leaf palette.
  u64 package_size() const { return 25ull << (l_ + r_ + 2); }
  // Colors in one per-batch flat palette (shortcut classes).
  u64 flat_palette_size() const { return pow2(l_ + 1) + pow2(r_ + 1); }

  ClassForests& forests() { return forests_; }
  const ClassForests& forests() const { return forests_; }
  const Stats& stats() const { return stats_; }

  // Sub-package assignment of the children of one node: entry j is the
  // package index granted to child rank j. Only the first fanout(level)
  // entries are handed out; indices repeat fanout(level)/f_level times
  // across the full permutation. Memoized per (vector, level) for the most
  // recent ordinal, which is the only one live queries touch.
  const std::vector<u32>& package_perm(u32 f_idx, u32 parent_level,
                                       u64 parent_ordinal);

  // Structural identity of the leaf palette of batch t in one forest: the
  // tree ordinal followed by the sub-package index taken at each level, root
  // first. Equal identities denote the same colors.
  std::vector<u64> leaf_palette(u32 f_idx, u64 t);

  // How many previous batches used that palette.
  u64 palette_count(const std::vector<u64>& palette) const;

  // True when some marked sibling along the leaf path of batch t holds the
  // same sub-package index as the path node, making the leaf palette unsafe
  // around v. Requires the store to be prepared for batch t.
  bool palette_blocked(u32 f_idx, u64 v, u64 t);

  // Per-vertex list-side shift, stable for the scheme's lifetime.
  u64 r_shift(u64 u) const {
    return 1 + prf_.uniform({kKeyShift, u}, 3 * pow2(r_ + 1));
  }

  // Color one batch of class edges, arrival order preserved. Returns the
  // scheme-local color coordinates per edge, or nullopt for uncolored edges.
  // `t` is the level batch ordinal; calls must use strictly increasing t.
  std::vector<std::optional<std::vector<u64>>> color_batch(
      const std::vector<LowEdge>& edges, u64 t);

 private:
  static constexpr u64 kKeyShift = 0x7573686966ULL;
  static constexpr u64 kKeyPerm = 0x7065726dULL;

  struct PermSlot {
    u64 ordinal = ~0ull;
    std::vector<u32> perm;
  };

  struct VecHash {
    std::size_t operator()(const std::vector<u64>& v) const {
      u64 h = 0x9ae16a3b2f90404fULL;
      for (u64 x : v) h = mix64(h ^ x);
      return std::size_t(h);
    }
  };

  std::vector<std::optional<std::vector<u64>>> color_flat(
      const std::vector<LowEdge>& edges, u64 t);

  u64 delta_ = 0;
  u32 l_ = 0;
  u32 r_ = 0;
  bool shortcut_ = false;
  KeyedPrf prf_;
  ClassForests forests_;
  Stats stats_;
  std::vector<std::vector<PermSlot>> perm_cache_;  // [f_idx][parent_level-1]
  std::unordered_map<std::vector<u64>, u64, VecHash> palette_counts_;
};

}  // namespace wsc
