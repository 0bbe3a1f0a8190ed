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

#include "wscolor/det_high.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "wscolor/expander.hpp"
#include "wscolor/konig.hpp"

namespace wsc {

namespace {

u64 checked_pow(u64 q, u32 e, const char* what) {
  u64 out = 1;
  for (u32 i = 0; i < e; ++i) {
    WSC_CHECK_MSG(out <= (~u64(0) / 4) / q, what);
    out *= q;
  }
  return out;
}

}  // namespace

FieldPoly encode_counter_poly(u64 q, u64 cap, u64 cnt, u64 id, u64 n) {
  WSC_CHECK_MSG(q >= 2 && cap >= 1, "tag parameters out of range");
  WSC_CHECK_MSG(cnt < cap, "counter outside its digit room");
  WSC_CHECK_MSG(id < n, "vertex id out of range");
  const u32 width = ceil_log_base(q, cap);
  const u32 id_digits = std::max<u32>(1, ceil_log_base(q, n));
  std::vector<u64> coeffs(width + id_digits, 0);
  u64 tmp = cnt;
  for (u32 i = 0; i < width; ++i) {
    coeffs[i] = tmp % q;
    tmp /= q;
  }
  tmp = id;
  for (u32 i = 0; i < id_digits; ++i) {
    coeffs[width + i] = tmp % q;
    tmp /= q;
  }
  return FieldPoly(q, std::move(coeffs));
}

DetHighScheme::DetHighScheme(u64 delta_pow2, u64 n, u32 l, u32 r,
                             const DetParams& params)
    : delta_(delta_pow2), n_(n), q_(params.q), l_(l), r_(r) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "degree cap must be a power of two here");
  WSC_CHECK_MSG(l_ + r_ + 2 < 64, "degree exponents out of range");
  WSC_CHECK_MSG(pow2(l_) <= delta_ && pow2(r_) <= delta_,
                "class exponent above the degree cap");
  WSC_CHECK_MSG(q_ >= 2, "field size must be at least 2");
  WSC_CHECK_MSG(params.lambda >= 2, "stretch factor must be at least 2");
  group_u_ = delta_ / pow2(l_);
  group_v_ = delta_ / pow2(r_);
  cap_ = ceil_div(pow2(l_ + r_ + 2), delta_);
  b1_ = ceil_log_base(q_, sat_mul(params.lambda, group_u_));
  b2_ = ceil_log_base(q_, sat_mul(params.lambda, group_v_));
  s_space_ = checked_pow(q_, b1_ + 2,
                         "left bucket space does not fit a machine word; the "
                         "stretch factor is too large");
  t_space_ = checked_pow(q_, b2_ + 2,
                         "right bucket space does not fit a machine word; the "
                         "stretch factor is too large");
}

u128 DetHighScheme::color_budget() const {
  return sat_mul(sat_mul(u128(s_space_), t_space_), cap_);
}

u64 DetHighScheme::count_u(u64 u) const {
  auto it = cnt_u_.find(u);
  return it == cnt_u_.end() ? 0 : it->second;
}

u64 DetHighScheme::count_v(u64 v) const {
  auto it = cnt_v_.find(v);
  return it == cnt_v_.end() ? 0 : it->second;
}

std::vector<std::vector<u64>> DetHighScheme::color_batch(
    const std::vector<std::pair<u64, u64>>& edges,
    const std::vector<u64>& l_active, const std::vector<u64>& r_active) {
  stats_.edges += edges.size();
  std::vector<std::vector<u64>> out(edges.size());

  const std::unordered_set<u64> la(l_active.begin(), l_active.end());
  const std::unordered_set<u64> ra(r_active.begin(), r_active.end());

  // Parallel copies of one pair are legal: each copy carries its own group
  // slot, and matching injectivity keeps their (s, t) coordinates or bucket
  // slots apart.
  std::unordered_map<u64, std::vector<std::pair<u64, std::size_t>>> around_u;
  std::unordered_map<u64, std::vector<std::pair<u64, std::size_t>>> around_v;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    const auto& [u, v] = edges[eidx];
    WSC_CHECK_MSG(la.count(u) && ra.count(v),
                  "class edge endpoint missing from the active set");
    around_u[u].emplace_back(v, eidx);
    around_v[v].emplace_back(u, eidx);
  }

  std::vector<u64> s_of(edges.size(), 0);
  std::vector<u64> t_of(edges.size(), 0);

  // Per-u pass: split the neighborhood into arrival-order groups of at most
  // delta/2^r vertices; each group's counter-tagged polynomials are perfectly
  // matched into the right-side expander, fixing t per edge. Within a group
  // all t values are distinct, so around u each t repeats at most once per
  // group and the bucket degree stays within bucket_cap().
  for (auto& [u, nbrs] : around_u) {
    WSC_CHECK_MSG(nbrs.size() < pow2(l_ + 1),
                  "left endpoint outside its degree band");
    for (std::size_t base = 0; base < nbrs.size(); base += group_v_) {
      const std::size_t end = std::min(nbrs.size(), base + group_v_);
      std::vector<FieldPoly> lefts;
      lefts.reserve(end - base);
      for (std::size_t i = base; i < end; ++i) {
        const u64 v = nbrs[i].first;
        const u64 cv = count_v(v);
        if (cv >= group_v_) {
          throw input_error("vertex degree exceeds the declared cap");
        }
        lefts.push_back(encode_counter_poly(q_, group_v_, cv, v, n_));
      }
      auto matched = kuhn_perfect_match(lefts, b2_);
      for (std::size_t i = base; i < end; ++i) {
        const auto& m = matched[i - base];
        if (!m) {
          throw contract_error(
              "high-degree class matcher failed to place a vertex");
        }
        t_of[nbrs[i].second] = tuple_to_index(m->tuple, q_);
      }
    }
  }

  // Symmetric per-v pass fixing s per edge.
  for (auto& [v, nbrs] : around_v) {
    WSC_CHECK_MSG(nbrs.size() < pow2(r_ + 1),
                  "right endpoint outside its degree band");
    for (std::size_t base = 0; base < nbrs.size(); base += group_u_) {
      const std::size_t end = std::min(nbrs.size(), base + group_u_);
      std::vector<FieldPoly> lefts;
      lefts.reserve(end - base);
      for (std::size_t i = base; i < end; ++i) {
        const u64 u = nbrs[i].first;
        const u64 cu = count_u(u);
        if (cu >= group_u_) {
          throw input_error("vertex degree exceeds the declared cap");
        }
        lefts.push_back(encode_counter_poly(q_, group_u_, cu, u, n_));
      }
      auto matched = kuhn_perfect_match(lefts, b1_);
      for (std::size_t i = base; i < end; ++i) {
        const auto& m = matched[i - base];
        if (!m) {
          throw contract_error(
              "high-degree class matcher failed to place a vertex");
        }
        s_of[nbrs[i].second] = tuple_to_index(m->tuple, q_);
      }
    }
  }

  // Bucket by (s, t) and finish each bucket with an exact coloring.
  std::map<std::pair<u64, u64>, std::vector<std::size_t>> buckets;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    buckets[{s_of[eidx], t_of[eidx]}].push_back(eidx);
  }
  for (const auto& [key, members] : buckets) {
    std::vector<KonigEdge> sub;
    sub.reserve(members.size());
    for (std::size_t eidx : members) {
      sub.push_back({edges[eidx].first, edges[eidx].second});
    }
    const std::vector<u32> slots = konig_color(sub);
    for (std::size_t i = 0; i < members.size(); ++i) {
      WSC_CHECK_MSG(slots[i] < cap_, "bucket degree above its structural bound");
      out[members[i]] = {key.first, key.second, slots[i]};
      ++stats_.colored;
    }
  }

  for (u64 u : l_active) ++cnt_u_[u];
  for (u64 v : r_active) ++cnt_v_[v];
  return out;
}

}  // namespace wsc
