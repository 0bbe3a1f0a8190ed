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

#include "wscolor/det_low.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace wsc {

namespace {

// Coordinate value of a matched right vertex: copies are stacked above the
// per-copy tuple index, copy numbers are 1-based.
u64 encode_coordinate(u64 q, u64 right_size, u32 copy,
                      const std::vector<u64>& tuple) {
  return (u64(copy) - 1) * right_size + tuple_to_index(tuple, q);
}

}  // namespace

DetLowScheme::DetLowScheme(u64 delta_pow2, long double epsilon, u32 l, u32 r,
                           u64 batch_bound, u64 n, const DetParams& params)
    : delta_(delta_pow2),
      epsilon_(epsilon),
      l_(l),
      r_(r),
      n_(n),
      q_(params.q),
      forests_(delta_pow2, epsilon, r, batch_bound) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "degree cap must be a power of two here");
  WSC_CHECK_MSG(l_ + 1 < 64 && r_ + 1 < 64, "degree exponents out of range");
  WSC_CHECK_MSG(q_ >= 2, "field size must be at least 2");
  WSC_CHECK_MSG(params.lambda >= 2, "stretch factor must be at least 2");
  WSC_CHECK_MSG(pow2(r_) > forests_.floor_value(),
                "class below the floor takes the direct palette, not forests");

  b0_ = ceil_log_base(q_, sat_mul(params.lambda, pow2(r_ + 1)));
  slot_space_ = 1;
  for (u32 e = 0; e < b0_ + 2; ++e) {
    WSC_CHECK_MSG(slot_space_ <= (~u64(0) / 4) / q_,
                  "edge-slot space does not fit a machine word; the stretch "
                  "factor is too large for the in-memory matchers");
    slot_space_ *= q_;
  }
  n_digits_ = std::max<u32>(1, ceil_log_base(q_, n_));

  for (const ForestShape& sh : forests_.shapes()) {
    DetVectorParams vp;
    for (u32 i = 0; i < sh.height(); ++i) {
      const u64 fan = sh.fanout(i + 1);       // left universe of H_i
      const u64 stretch_of = sh.f[i];         // right side sized by f_{i+1}
      const u32 a = std::max<u32>(1, ceil_log_base(q_, fan));
      const u32 b = ceil_log_base(q_, sat_mul(params.lambda, stretch_of));
      ExpanderParams ep = ExpanderParams::stacked(q_, a, b);
      const u64 rs = ep.right_size_u64();
      const u128 space = u128(ep.copies) * rs;
      WSC_CHECK_MSG(space <= u128(~u64(0)),
                    "coordinate space does not fit a machine word");
      vp.level.push_back(ep);
      vp.coord_space.push_back(u64(space));
    }
    vec_.push_back(std::move(vp));
  }
}

bool DetLowScheme::edge_in_level(u32 f_idx, u32 i, u64 s, u64 c) const {
  const DetVectorParams& vp = vec_[f_idx];
  const ExpanderParams& p = vp.level[i];
  if (c >= vp.coord_space[i]) return false;
  const u64 rs = p.right_size_u64();
  const std::vector<u64> tuple = index_to_tuple(c % rs, q_, p.b + 2);
  const FieldPoly poly = FieldPoly::from_integer(q_, s, p.a);
  return gamma_point(poly, tuple[0], p.b) == tuple;
}

u64 DetLowScheme::palette_use_count(u32 f_idx, u64 t,
                                    const std::vector<u64>& c) const {
  if (cnt_memo_batch_ != t) {
    cnt_memo_.clear();
    cnt_memo_batch_ = t;
  }
  std::vector<u64> key;
  key.reserve(c.size() + 1);
  key.push_back(f_idx);
  key.insert(key.end(), c.begin(), c.end());
  auto hit = cnt_memo_.find(key);
  if (hit != cnt_memo_.end()) return hit->second;

  const ForestShape& sh = forests_.shapes()[f_idx];
  const u32 h = sh.height();
  WSC_CHECK_MSG(c.size() == h, "palette must carry one coordinate per level");

  // Count leaves of t's tree, before t, whose every rank is admissible for
  // the palette: a mixed-radix "smaller prefix" walk from the top digit down.
  std::vector<u64> below(h, 0);   // admissible ranks smaller than t's rank
  std::vector<bool> tight(h, false);
  std::vector<u64> sizes(h, 0);   // all admissible ranks per level
  for (u32 j = 0; j < h; ++j) {
    const u64 mine = sh.rank_in_parent(j, t);
    for (u64 s = 0; s < sh.fanout(j + 1); ++s) {
      if (!edge_in_level(f_idx, j, s, c[j])) continue;
      ++sizes[j];
      if (s < mine) ++below[j];
      if (s == mine) tight[j] = true;
    }
  }
  std::vector<u64> prod(h + 1, 1);  // prod[j] = admissible leaves below level j
  for (u32 j = 0; j < h; ++j) prod[j + 1] = prod[j] * sizes[j];

  u64 cnt = 0;
  for (u32 j = h; j-- > 0;) {
    cnt += below[j] * prod[j];
    if (!tight[j]) break;
  }
  WSC_CHECK_MSG(cnt <= pow2(r_ + 1),
                "palette admits more prior batches than its structural bound");
  cnt_memo_.emplace(std::move(key), cnt);
  return cnt;
}

std::optional<std::vector<u64>> DetLowScheme::select_palette(u32 f_idx, u64 v,
                                                             u64 t) const {
  const DetVectorParams& vp = vec_[f_idx];
  const MarkStore& store = forests_.store(f_idx);
  const ForestShape& sh = store.shape();
  const u32 h = sh.height();
  const std::vector<Mark>& marks = store.marks_of(v);

  u32 k = h;
  if (!marks.empty()) {
    WSC_CHECK_MSG(marks.front().level < h, "mark above the root level");
    k = marks.front().level + 1;
  }

  std::vector<u64> c(h, 0);

  // Coordinate c_k: continue the online matcher of the scope node's children.
  // Its occupancy is exactly the already-marked children, all at level k-1.
  {
    const ExpanderParams& p = vp.level[k - 1];
    const u64 rs = p.right_size_u64();
    MatchState st(p);
    for (const Mark& m : marks) {
      if (m.level != k - 1) break;
      WSC_CHECK_MSG(m.suffix.size() == h - m.level,
                    "mark lost part of its coordinate tuple");
      const u64 val = m.suffix[0];
      WSC_CHECK_MSG(val < vp.coord_space[k - 1],
                    "stored coordinate outside the matcher range");
      st.occupy(u32(val / rs) + 1, index_to_tuple(val % rs, q_, p.b + 2));
    }
    const u64 s = sh.rank_in_parent(k - 1, t);
    auto res = st.match(FieldPoly::from_integer(q_, s, p.a));
    if (!res) return std::nullopt;
    c[k - 1] = encode_coordinate(q_, rs, res->copy, res->tuple);
  }

  // Coordinates above the scope are inherited from the first marked child;
  // every marked child agrees on them, so the choice does not matter.
  if (k < h) {
    const Mark& donor = marks.front();
    for (u32 j = k + 1; j <= h; ++j) c[j - 1] = donor.suffix[j - k];
  }

  // Coordinates below the scope are fresh: a new matcher per level with the
  // path rank as its first and only arrival.
  for (u32 j = 1; j < k; ++j) {
    const ExpanderParams& p = vp.level[j - 1];
    MatchState fresh(p);
    const u64 s = sh.rank_in_parent(j - 1, t);
    auto res = fresh.match(FieldPoly::from_integer(q_, s, p.a));
    if (!res) return std::nullopt;
    c[j - 1] = encode_coordinate(q_, p.right_size_u64(), res->copy, res->tuple);
  }
  return c;
}

std::vector<std::optional<std::vector<u64>>> DetLowScheme::color_batch(
    const std::vector<LowEdge>& edges, u64 t) {
  stats_.edges += edges.size();
  std::vector<std::optional<std::vector<u64>>> out(edges.size());

  struct RightState {
    std::optional<u32> f_idx;
    std::optional<std::vector<u64>> palette;
    u64 deg = 0;  // full level-batch degree, from the edge records
    u64 tree = 0;
    u64 cnt = 0;
  };
  std::unordered_map<u64, RightState> right;
  std::unordered_map<u64, std::vector<u64>> around_u;
  for (const LowEdge& e : edges) {
    auto [it, fresh] = right.try_emplace(e.v);
    WSC_CHECK_MSG(e.v_batch_deg >= pow2(r_) && e.v_batch_deg < pow2(r_ + 1),
                  "right endpoint outside its degree band");
    WSC_CHECK_MSG(fresh || it->second.deg == e.v_batch_deg,
                  "inconsistent batch degree for one vertex");
    it->second.deg = e.v_batch_deg;
    WSC_CHECK_MSG(e.u < n_, "left endpoint id out of range");
    around_u[e.u].push_back(e.v);
  }

  // Edge ranks around u follow arrival order, the fixed canonical order of
  // the class stream. Parallel copies of one pair are legal here (a pair
  // buffer flushing between two copies sends both to the same colorer); they
  // share the per-pair matcher assignment and are told apart by the rank
  // coordinate alone.
  for (const auto& [u, vs] : around_u) {
    WSC_CHECK_MSG(vs.size() < pow2(l_ + 1),
                  "left endpoint outside its degree band");
  }

  // Right pass: frequency vector, palette, and structural use count per v.
  for (auto& [v, st] : right) {
    forests_.prepare(v, t);
    st.f_idx = forests_.select(v, t);
    if (!st.f_idx) continue;
    st.palette = select_palette(*st.f_idx, v, t);
    if (!st.palette) continue;
    st.tree = forests_.shapes()[*st.f_idx].node_at(
        forests_.shapes()[*st.f_idx].height(), t);
    st.cnt = palette_use_count(*st.f_idx, t, *st.palette);
  }

  // Per-v perfect matching of the class neighborhood into the u-side
  // expander: u's id is the left polynomial, the matched evaluation point
  // and tuple become the (t_i, r_i) part of the color index.
  std::unordered_map<u64, std::unordered_map<u64, std::pair<u64, u64>>> assign;
  {
    std::unordered_map<u64, std::vector<u64>> around_v;
    for (const LowEdge& e : edges) around_v[e.v].push_back(e.u);
    for (auto& [v, us] : around_v) {
      const RightState& st = right.at(v);
      if (!st.f_idx || !st.palette) continue;
      // Distinct neighbors only, in first-occurrence order: parallel copies
      // share one matcher slot.
      std::vector<u64> uniq;
      uniq.reserve(us.size());
      std::unordered_set<u64> seen;
      for (u64 u : us) {
        if (seen.insert(u).second) uniq.push_back(u);
      }
      std::vector<FieldPoly> lefts;
      lefts.reserve(uniq.size());
      for (u64 u : uniq) {
        lefts.push_back(FieldPoly::from_integer(q_, u, n_digits_));
      }
      auto matched = kuhn_perfect_match(lefts, b0_);
      for (std::size_t i = 0; i < uniq.size(); ++i) {
        if (!matched[i]) continue;
        const u64 ti = matched[i]->x + 1;
        const u64 ri = tuple_to_index(matched[i]->tuple, q_) + 1;
        assign[v].emplace(uniq[i], std::pair<u64, u64>(ti, ri));
      }
    }
  }

  // Emission pass, in arrival order. `j` is the 1-based arrival rank of the
  // edge among u's class edges this batch.
  std::unordered_map<u64, u64> arrival_rank;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    const LowEdge& e = edges[eidx];
    const u64 j = ++arrival_rank[e.u];
    const RightState& st = right.at(e.v);
    if (!st.f_idx) {
      ++stats_.bot_dead_end;
      continue;
    }
    if (!st.palette) {
      ++stats_.bot_palette;
      continue;
    }
    const std::pair<u64, u64>* kappa = nullptr;
    if (auto vit = assign.find(e.v); vit != assign.end()) {
      if (auto uit = vit->second.find(e.u); uit != vit->second.end()) {
        kappa = &uit->second;
      }
    }
    if (!kappa) {
      ++stats_.bot_match;
      continue;
    }
    const u64 slot = (st.cnt + kappa->second) % slot_space_;

    std::vector<u64> local;
    local.reserve(st.palette->size() + 5);
    local.push_back(*st.f_idx);
    local.push_back(st.tree);
    local.insert(local.end(), st.palette->begin(), st.palette->end());
    local.push_back(kappa->first);
    local.push_back(slot);
    local.push_back(j);
    out[eidx] = std::move(local);
    ++stats_.colored;
  }

  // Close the batch: accumulate degree everywhere; mark the chosen leaf with
  // the palette tuple. A vertex whose palette dead-ended used no colors, so
  // it only accumulates (its batches need no mark coverage).
  for (const auto& [v, st] : right) {
    if (st.f_idx && st.palette) {
      forests_.record(v, t, st.deg, st.f_idx, *st.palette);
    } else {
      forests_.record(v, t, st.deg, std::nullopt);
    }
  }
  return out;
}

std::optional<MarkViolation> DetLowScheme::validate(u64 t, u64 n) {
  if (auto vio = forests_.validate(t, n)) return vio;

  for (u32 f_idx = 0; f_idx < vec_.size(); ++f_idx) {
    const MarkStore& store = forests_.store(f_idx);
    const ForestShape& sh = store.shape();
    const u32 h = sh.height();
    // Ancestor ordinal of a mark at a (weakly) higher level.
    auto anc = [&](const Mark& m, u32 level) {
      return m.ordinal / (sh.span(level) / sh.span(m.level));
    };
    for (u64 v : store.tracked_vertices()) {
      const std::vector<Mark>& marks = store.marks_of(v);
      for (const Mark& m : marks) {
        if (m.suffix.size() != h - m.level) {
          return MarkViolation{v, m.level, m.ordinal, 4,
                               "mark lost part of its coordinate tuple"};
        }
      }
      // Any two marks agree on every coordinate above their lowest common
      // ancestor.
      for (std::size_t a = 0; a < marks.size(); ++a) {
        for (std::size_t b = a + 1; b < marks.size(); ++b) {
          const Mark& m1 = marks[a];
          const Mark& m2 = marks[b];
          u32 lca = std::max(m1.level, m2.level);
          while (lca < h && anc(m1, lca) != anc(m2, lca)) ++lca;
          for (u32 coord = lca + 1; coord <= h; ++coord) {
            if (m1.suffix[coord - m1.level - 1] !=
                m2.suffix[coord - m2.level - 1]) {
              std::ostringstream msg;
              msg << "marks " << m1.level << ":" << m1.ordinal << " and "
                  << m2.level << ":" << m2.ordinal
                  << " disagree on coordinate " << coord;
              return MarkViolation{v, m2.level, m2.ordinal, 4, msg.str()};
            }
          }
        }
      }
      // Marked children of one parent carry distinct coordinate values, each
      // admissible for the child's rank.
      std::map<std::pair<u32, u64>, std::vector<const Mark*>> by_parent;
      for (const Mark& m : marks) {
        by_parent[{m.level, m.ordinal / sh.fanout(m.level + 1)}].push_back(&m);
      }
      for (const auto& [key, group] : by_parent) {
        std::vector<u64> values;
        for (const Mark* m : group) {
          const u64 rank = m->ordinal % sh.fanout(m->level + 1);
          if (!edge_in_level(f_idx, m->level, rank, m->suffix[0])) {
            return MarkViolation{v, m->level, m->ordinal, 4,
                                 "stored coordinate is not reachable from "
                                 "the mark's rank"};
          }
          values.push_back(m->suffix[0]);
        }
        std::sort(values.begin(), values.end());
        if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
          return MarkViolation{v, key.first, group.front()->ordinal, 4,
                               "sibling marks share a coordinate value"};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace wsc
