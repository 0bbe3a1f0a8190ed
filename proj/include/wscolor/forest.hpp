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

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wscolor/common.hpp"

namespace wsc {

// Entries f_1..f_h of a batch-scheduling frequency vector; every entry is a
// power of two, non-increasing, and the final entry equals the class floor.
using FreqVector = std::vector<u64>;

// The class floor: delta^epsilon rounded up to a power of two, at least 2.
// `delta_pow2` must itself be a power of two.
u64 freq_floor(u64 delta_pow2, long double epsilon);

// All frequency vectors valid for a class with v-side degree exponent r:
// 2^{r+1} >= f_1 >= ... >= f_h = floor value, and the span of a whole tree,
// 2^{r+1} * f_1 * ... * f_{h-1}, stays within `batch_bound`. Returned in
// lexicographic order.
std::vector<FreqVector> enumerate_freq_vectors(u64 delta_pow2, long double epsilon,
                                               u32 r, u64 batch_bound);

// Arithmetic view of the implicit forest over batch indices for one vector.
// Level 0 holds one leaf per batch; a level-k node covers span(k) consecutive
// batches; roots sit at level h = f.size(). No tree is ever materialized.
struct ForestShape {
  u64 f0 = 0;        // 2^{r+1}
  FreqVector f;      // f_1..f_h
  std::vector<u64> spans;  // spans[k] = f_0 * f_1 * ... * f_{k-1}; spans[0] = 1

  u32 height() const { return u32(f.size()); }
  u64 span(u32 level) const { return spans[level]; }
  // Number of children of a level-`level` node (1 <= level <= height).
  u64 fanout(u32 level) const { return spans[level] / spans[level - 1]; }
  // Ordinal of the level-`level` ancestor of batch t.
  u64 node_at(u32 level, u64 t) const { return t / spans[level]; }
  // Rank of the level-`level` node over batch t among its parent's children.
  u64 rank_in_parent(u32 level, u64 t) const {
    return node_at(level, t) % fanout(level + 1);
  }
};

ForestShape make_shape(u32 r, FreqVector f);

// A marked node: an off-path subtree in which the vertex accumulated enough
// degree, together with the accumulated amount and, in deterministic mode,
// the surviving coordinate suffix (c_{level+1}..c_h).
struct Mark {
  u32 level = 0;
  u64 ordinal = 0;
  u64 deg = 0;
  std::vector<u64> suffix;
};

struct MarkViolation {
  u64 v = 0;
  u32 level = 0;
  u64 ordinal = 0;
  int rule = 0;  // 1 = placement, 2 = degree lower bound, 3 = space bound
  std::string detail;
};

// Per-vector mark bookkeeping across all vertices. Updates are lazy per
// vertex: skipped batches contribute zero degree, so elevating on the next
// appearance produces the same state as updating every batch.
class MarkStore {
 public:
  explicit MarkStore(const ForestShape* shape) : shape_(shape) {}

  // Preprocessing for batch t: drop marks of older trees, elevate marks whose
  // parent fell off the path to the just-closed child of the new path, and
  // reset degree accumulators of freshly entered path nodes. Idempotent.
  void update(u64 v, u64 t);

  // Postprocessing for batch t: add `deg` to every path accumulator and, when
  // `mark` is set, mark the leaf with that degree and the given suffix.
  void record(u64 v, u64 t, u64 deg, bool mark, std::vector<u64> suffix = {});

  // Marks of v, sorted by (level, ordinal); empty if v untracked. Valid only
  // after update(v, t) for the current batch.
  const std::vector<Mark>& marks_of(u64 v) const;
  // Number of marks of v at `level`, i.e. marked children of the path node at
  // level+1 once update has run.
  u64 count_at_level(u64 v, u32 level) const;

  u64 total_marks() const { return total_marks_; }
  const ForestShape& shape() const { return *shape_; }

  // Sorted ids of every vertex with live bookkeeping; validator iteration.
  std::vector<u64> tracked_vertices() const;

  // Force-update every tracked vertex (the per-vertex laziness otherwise
  // leaves non-appearing vertices stale) and check placement, degree and
  // space rules. `n` bounds the space rule; `r` fixes the degree rule.
  std::optional<MarkViolation> validate(u64 t, u32 r, u64 n);

  // Validator drill hook: plant a mark directly, bypassing the elevation
  // bookkeeping, so rule violations can be exercised.
  void inject_mark(u64 v, u64 t, Mark m);

  void dump(std::ostream& os, const std::string& vector_label) const;

 private:
  struct VertexState {
    std::vector<Mark> marks;
    std::vector<u64> path_deg;  // accumulator per level 0..h for current path
    u64 last_t = 0;
  };

  const ForestShape* shape_;
  std::unordered_map<u64, VertexState> per_vertex_;
  u64 total_marks_ = 0;
};

// All forests of one degree class: the enumerated vector family with one
// MarkStore each, plus the greedy smallest-first vector selector.
class ClassForests {
 public:
  ClassForests(u64 delta_pow2, long double epsilon, u32 r, u64 batch_bound);

  bool empty() const { return shapes_.empty(); }
  u64 floor_value() const { return fh_; }
  u32 r() const { return r_; }
  const std::vector<ForestShape>& shapes() const { return shapes_; }
  MarkStore& store(u32 idx) { return stores_[idx]; }
  const MarkStore& store(u32 idx) const { return stores_[idx]; }

  // Run the preprocessing step of every store for v.
  void prepare(u64 v, u64 t);

  // Choose the frequency vector for v at batch t: each coordinate is the
  // smallest power of two in [floor, previous] such that some valid vector
  // with the extended prefix has fewer marked children of the corresponding
  // path node than the candidate value; selection ends when a coordinate hits
  // the floor, returning the lexicographically smallest witness. Returns
  // nullopt when the span budget leaves no candidate at some step.
  std::optional<u32> select(u64 v, u64 t) const;

  // Postprocessing: accumulate degree in every store; mark the leaf in the
  // chosen one. `suffix` is the deterministic-mode coordinate tuple c_1..c_h.
  void record(u64 v, u64 t, u64 deg, std::optional<u32> chosen,
              std::vector<u64> suffix = {});

  // Validate every store; also enforces the per-vector space bound
  // sum_v |M_{v,f}| <= 2^{h+3} * n.
  std::optional<MarkViolation> validate(u64 t, u64 n);

  void dump(std::ostream& os) const;

 private:
  u64 fh_ = 0;
  u32 r_ = 0;
  std::vector<ForestShape> shapes_;
  std::vector<MarkStore> stores_;
};

}  // namespace wsc
