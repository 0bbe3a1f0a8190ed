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

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wscolor/color_id.hpp"
#include "wscolor/prng.hpp"

namespace wsc {

// Per-bucket degree cap for a high degree class: buckets pruned to this
// degree are colorable from a flat palette of the same size.
u64 high_bucket_cap(u64 delta_pow2, u32 l, u32 r);

// Randomized scheme for a high degree class (l, r). Colors live in a
// (Delta/2^l) x (Delta/2^r) matrix of disjoint flat palettes. Each batch,
// every class vertex lands in the bucket row (column) given by its secret
// shift plus its class appearance counter; bucket subgraphs are pruned in
// arrival order down to the cap and then offline-colored within their own
// palette. Row/column reuse across batches is impossible because counters
// advance exactly when a vertex's batch degree sits in the class band.
class HighScheme {
 public:
  struct Stats {
    u64 edges = 0;
    u64 colored = 0;
    u64 bot_pruned = 0;
  };

  HighScheme(u64 delta_pow2, u32 l, u32 r, KeyedPrf prf);

  u32 l() const { return l_; }
  u32 r() const { return r_; }
  u64 rows() const { return rows_; }
  u64 cols() const { return cols_; }
  u64 bucket_cap() const { return cap_; }
  // Total colors the matrix can ever emit.
  u64 color_budget() const { return rows_ * cols_ * cap_; }

  u64 shift_u(u64 u) const { return prf_.uniform({kKeyRow, u}, rows_); }
  u64 shift_v(u64 v) const { return prf_.uniform({kKeyCol, v}, cols_); }
  u64 count_u(u64 u) const { return lookup(cnt_u_, u); }
  u64 count_v(u64 v) const { return lookup(cnt_v_, v); }

  const Stats& stats() const { return stats_; }

  // Color one batch of class edges, arrival order preserved. `l_active` and
  // `r_active` list the vertices whose full-batch degree lies in the class
  // band; their appearance counters advance this batch even when none of
  // their edges land in this class pairing. Returns the scheme-local color
  // coordinates (row, column, palette slot) per edge, or nullopt for edges
  // pruned out of an overfull bucket.
  std::vector<std::optional<std::vector<u64>>> color_batch(
      const std::vector<std::pair<u64, u64>>& edges,
      const std::vector<u64>& l_active, const std::vector<u64>& r_active);

 private:
  static constexpr u64 kKeyRow = 0x726f77ULL;
  static constexpr u64 kKeyCol = 0x636f6cULL;

  static u64 lookup(const std::unordered_map<u64, u64>& m, u64 k) {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  }

  u64 delta_ = 0;
  u32 l_ = 0;
  u32 r_ = 0;
  u64 rows_ = 0;
  u64 cols_ = 0;
  u64 cap_ = 0;
  KeyedPrf prf_;
  Stats stats_;
  std::unordered_map<u64, u64> cnt_u_, cnt_v_;
};

}  // namespace wsc
