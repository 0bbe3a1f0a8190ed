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

#include <unordered_map>
#include <utility>
#include <vector>

#include "wscolor/common.hpp"
#include "wscolor/det_params.hpp"
#include "wscolor/field_poly.hpp"

namespace wsc {

// Batch-counter-tagged identity polynomial: the base-q digits of `cnt`
// (cnt < cap, using exactly the digit room of cap) in the low positions,
// the digits of `id` (id < n) shifted above them. Two tags of the same id
// with different counters differ as polynomials, which is what makes colors
// from different batches collide-free.
FieldPoly encode_counter_poly(u64 q, u64 cap, u64 cnt, u64 id, u64 n);

// Deterministic counterpart of HighScheme for one degree class with side
// exponents l and r. Per batch, each vertex's class neighborhood is split
// into groups that are perfectly matched into multiplicity-code expanders;
// the matched tuples pin a bucket per edge, and each bucket (never deeper
// than ceil(2^{l+r+2}/delta) by the group structure) is finished with an
// exact bipartite coloring. No edge is ever deferred.
class DetHighScheme {
 public:
  struct Stats {
    u64 edges = 0;
    u64 colored = 0;
  };

  DetHighScheme(u64 delta_pow2, u64 n, u32 l, u32 r, const DetParams& params);

  static constexpr const char* scheme() { return "DH"; }
  u32 l() const { return l_; }
  u32 r() const { return r_; }
  u64 q() const { return q_; }
  u32 b1() const { return b1_; }
  u32 b2() const { return b2_; }
  u64 s_space() const { return s_space_; }  // q^{b1+2}
  u64 t_space() const { return t_space_; }  // q^{b2+2}
  // Colors per bucket: ceil(2^{l+r+2} / delta).
  u64 bucket_cap() const { return cap_; }
  // Closed-form color budget s_space * t_space * bucket_cap, saturating.
  u128 color_budget() const;

  u64 count_u(u64 u) const;
  u64 count_v(u64 v) const;
  const Stats& stats() const { return stats_; }

  // Color one level batch of this class; parallel copies of one pair are
  // allowed. `l_active` and `r_active` list every vertex whose full batch
  // degree lies in the side's band (their counters advance even when the
  // class pairing left them without edges here). Entry i is the local tuple
  // (s, t, slot).
  std::vector<std::vector<u64>> color_batch(
      const std::vector<std::pair<u64, u64>>& edges,
      const std::vector<u64>& l_active, const std::vector<u64>& r_active);

 private:
  u64 delta_ = 0;
  u64 n_ = 0;
  u64 q_ = 0;
  u32 l_ = 0;
  u32 r_ = 0;
  u32 b1_ = 0;
  u32 b2_ = 0;
  u64 cap_ = 0;      // bucket color cap
  u64 group_u_ = 0;  // delta / 2^l, the v-side group width and u counter cap
  u64 group_v_ = 0;  // delta / 2^r, the u-side group width and v counter cap
  u64 s_space_ = 0;
  u64 t_space_ = 0;
  Stats stats_;
  std::unordered_map<u64, u64> cnt_u_;
  std::unordered_map<u64, u64> cnt_v_;
};

}  // namespace wsc
