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
#include <vector>

#include "wscolor/common.hpp"
#include "wscolor/det_params.hpp"
#include "wscolor/expander.hpp"
#include "wscolor/field_poly.hpp"
#include "wscolor/forest.hpp"
#include "wscolor/rand_low.hpp"

namespace wsc {

// Deterministic counterpart of LowScheme for one degree class with v-side
// exponent r and u-side exponent l. The forest scheduling is identical; the
// random package permutations are replaced by coordinate tuples (c_1..c_h)
// chosen through online matchings on multiplicity-code expanders, and the
// per-u random shift is replaced by a perfect matching of the batch
// neighborhood into a single-copy expander.

// Matching machinery of one frequency vector: level[i] matches child ranks at
// tree level i (left universe of size fanout(i+1)) to coordinate values
// c_{i+1}; coord_space[i] is the number of encodable values, i.e.
// copies * q^{digits+2} of level[i].
struct DetVectorParams {
  std::vector<ExpanderParams> level;
  std::vector<u64> coord_space;
};

class DetLowScheme {
 public:
  struct Stats {
    u64 edges = 0;          // class edges seen
    u64 colored = 0;        // colors emitted
    u64 bot_dead_end = 0;   // vector selection dead-ended
    u64 bot_palette = 0;    // a coordinate matcher had no free value
    u64 bot_match = 0;      // the u-side perfect matching failed
  };

  DetLowScheme(u64 delta_pow2, long double epsilon, u32 l, u32 r,
               u64 batch_bound, u64 n, const DetParams& params);

  static constexpr const char* scheme() { return "DL"; }
  u32 l() const { return l_; }
  u32 r() const { return r_; }
  u64 q() const { return q_; }
  u32 b0() const { return b0_; }
  // Size of the middle color-index coordinate, q^{b0+2}.
  u64 slot_space() const { return slot_space_; }
  const ClassForests& forests() const { return forests_; }
  ClassForests& forests() { return forests_; }
  const DetVectorParams& vector_params(u32 f_idx) const { return vec_[f_idx]; }
  const Stats& stats() const { return stats_; }

  // Adjacency test of the level-i matcher of vector f_idx: can coordinate
  // value c be produced for a child of rank s?
  bool edge_in_level(u32 f_idx, u32 i, u64 s, u64 c) const;

  // Number of leaves of t's tree, strictly before t, whose rank path admits
  // every coordinate of palette c. This is the structural use counter: it
  // never exceeds 2^{r+1} and is recomputable by any party from (f_idx, t, c).
  u64 palette_use_count(u32 f_idx, u64 t, const std::vector<u64>& c) const;

  // Choose the coordinate tuple (c_1..c_h) for v at batch t. Requires
  // forests().prepare(v, t) to have run. nullopt when a matcher dead-ends.
  std::optional<std::vector<u64>> select_palette(u32 f_idx, u64 v, u64 t) const;

  // Color one level batch of this class. Entry i of the result is the local
  // color tuple (f_idx, tree, c_1..c_h, t_i, slot, j) for edges[i], or nullopt
  // for an edge deferred to the recursion. Parallel copies of one pair are
  // allowed; the arrival-rank coordinate keeps their colors apart.
  std::vector<std::optional<std::vector<u64>>> color_batch(
      const std::vector<LowEdge>& edges, u64 t);

  // Structural forest rules plus the coordinate rules: suffix lengths, suffix
  // agreement up to the lowest common ancestor, and per-parent matching
  // consistency of marked children. Rule 4 violations reuse MarkViolation.
  std::optional<MarkViolation> validate(u64 t, u64 n);

 private:
  u64 delta_;
  long double epsilon_;
  u32 l_ = 0;
  u32 r_ = 0;
  u64 n_ = 0;
  u64 q_ = 0;
  u32 b0_ = 0;
  u64 slot_space_ = 0;
  u32 n_digits_ = 0;  // left-side digits of the u matcher
  ClassForests forests_;
  std::vector<DetVectorParams> vec_;
  Stats stats_;
  // Per-batch memo of palette_use_count keyed by the palette tuple.
  mutable std::unordered_map<std::vector<u64>, u64, TupleHash> cnt_memo_;
  mutable u64 cnt_memo_batch_ = ~u64(0);
  mutable u32 cnt_memo_f_idx_ = ~u32(0);
};

}  // namespace wsc
