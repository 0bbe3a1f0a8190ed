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

#include "wscolor/rand_high.hpp"

#include "wscolor/konig.hpp"

namespace wsc {

u64 high_bucket_cap(u64 delta_pow2, u32 l, u32 r) {
  return 4 + ceil_div(pow2(l + r + 3), delta_pow2);
}

HighScheme::HighScheme(u64 delta_pow2, u32 l, u32 r, KeyedPrf prf)
    : delta_(delta_pow2), l_(l), r_(r), prf_(prf) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "degree cap must be a power of two");
  WSC_CHECK_MSG(pow2(l_) <= delta_ && pow2(r_) <= delta_,
                "class exponents exceed the degree cap");
  rows_ = delta_ / pow2(l_);
  cols_ = delta_ / pow2(r_);
  cap_ = high_bucket_cap(delta_, l_, r_);
}

std::vector<std::optional<std::vector<u64>>> HighScheme::color_batch(
    const std::vector<std::pair<u64, u64>>& edges,
    const std::vector<u64>& l_active, const std::vector<u64>& r_active) {
  std::vector<std::optional<std::vector<u64>>> out(edges.size());
  stats_.edges += edges.size();

  auto land = [this](const std::vector<u64>& active,
                     const std::unordered_map<u64, u64>& cnt, u64 side,
                     u64 extent) {
    std::unordered_map<u64, u64> pos;
    pos.reserve(active.size());
    for (u64 x : active) {
      const u64 c = lookup(cnt, x);
      if (c >= extent)
        throw input_error("vertex degree exceeds the declared cap");
      const u64 s = side == 0 ? shift_u(x) : shift_v(x);
      pos.emplace(x, (s + c) % extent);
    }
    return pos;
  };
  const std::unordered_map<u64, u64> row = land(l_active, cnt_u_, 0, rows_);
  const std::unordered_map<u64, u64> col = land(r_active, cnt_v_, 1, cols_);

  std::unordered_map<u64, std::vector<std::size_t>> buckets;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    auto ru = row.find(edges[eidx].first);
    auto cv = col.find(edges[eidx].second);
    WSC_CHECK_MSG(ru != row.end() && cv != col.end(),
                  "class edge endpoint missing from the active set");
    buckets[ru->second * cols_ + cv->second].push_back(eidx);
  }

  for (auto& [key, members] : buckets) {
    const u64 x = key / cols_;
    const u64 y = key % cols_;

    // Prune in arrival order against live degrees: once an edge is examined
    // with both endpoints at or under the cap, neither endpoint can rise
    // again, so survivors form a subgraph of maximum degree at most the cap.
    std::unordered_map<u64, u64> du, dv;
    for (std::size_t eidx : members) {
      ++du[edges[eidx].first];
      ++dv[edges[eidx].second];
    }
    std::vector<std::size_t> kept;
    kept.reserve(members.size());
    for (std::size_t eidx : members) {
      const auto& [u, v] = edges[eidx];
      if (du[u] > cap_ || dv[v] > cap_) {
        --du[u];
        --dv[v];
        ++stats_.bot_pruned;
      } else {
        kept.push_back(eidx);
      }
    }

    std::vector<KonigEdge> sub;
    sub.reserve(kept.size());
    for (std::size_t eidx : kept)
      sub.push_back({edges[eidx].first, edges[eidx].second});
    const std::vector<u32> slots = konig_color(sub);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      WSC_CHECK(slots[i] < cap_);
      out[kept[i]] = std::vector<u64>{x, y, slots[i]};
      ++stats_.colored;
    }
  }

  for (u64 u : l_active) ++cnt_u_[u];
  for (u64 v : r_active) ++cnt_v_[v];
  return out;
}

}  // namespace wsc
