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

#include "wscolor/rand_low.hpp"

#include <algorithm>
#include <unordered_set>

namespace wsc {

u64 low_kappa(u32 l, u32 r, u64 cnt, u64 r_shift, u64 i) {
  const u64 package = 25ull << (l + r + 2);
  return (5 * pow2(l + 1) * (cnt + r_shift) + i) % package;
}

LowScheme::LowScheme(u64 delta_pow2, long double epsilon, u32 l, u32 r,
                     u64 batch_bound, KeyedPrf prf)
    : delta_(delta_pow2),
      l_(l),
      r_(r),
      prf_(prf),
      forests_(delta_pow2, epsilon, r, batch_bound) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "degree cap must be a power of two");
  WSC_CHECK_MSG(l_ + r_ + 2 < 58, "class exponents overflow the package size");
  shortcut_ = pow2(r_) <= forests_.floor_value();
  perm_cache_.resize(forests_.shapes().size());
  for (std::size_t i = 0; i < perm_cache_.size(); ++i)
    perm_cache_[i].resize(forests_.shapes()[i].height());
}

const std::vector<u32>& LowScheme::package_perm(u32 f_idx, u32 parent_level,
                                                u64 parent_ordinal) {
  const ForestShape& sh = forests_.shapes()[f_idx];
  WSC_CHECK(parent_level >= 1 && parent_level <= sh.height());
  PermSlot& slot = perm_cache_[f_idx][parent_level - 1];
  if (slot.ordinal != parent_ordinal) {
    const u64 packages = 5 * sh.f[parent_level - 1];
    const u64 children = sh.fanout(parent_level);
    WSC_CHECK(children % sh.f[parent_level - 1] == 0);
    const u64 mult = children / sh.f[parent_level - 1];
    std::vector<u32> perm;
    perm.reserve(packages * mult);
    for (u64 j = 0; j < packages; ++j)
      for (u64 c = 0; c < mult; ++c) perm.push_back(u32(j));
    auto rng = prf_.stream({kKeyPerm, f_idx, parent_level, parent_ordinal});
    shuffle_in_place(perm, rng);
    slot.ordinal = parent_ordinal;
    slot.perm = std::move(perm);
  }
  return slot.perm;
}

std::vector<u64> LowScheme::leaf_palette(u32 f_idx, u64 t) {
  const ForestShape& sh = forests_.shapes()[f_idx];
  const u32 h = sh.height();
  std::vector<u64> id;
  id.reserve(h + 1);
  id.push_back(sh.node_at(h, t));
  for (u32 lvl = h; lvl >= 1; --lvl) {
    const std::vector<u32>& perm = package_perm(f_idx, lvl, sh.node_at(lvl, t));
    id.push_back(perm[sh.rank_in_parent(lvl - 1, t)]);
  }
  return id;
}

u64 LowScheme::palette_count(const std::vector<u64>& palette) const {
  auto it = palette_counts_.find(palette);
  return it == palette_counts_.end() ? 0 : it->second;
}

bool LowScheme::palette_blocked(u32 f_idx, u64 v, u64 t) {
  const ForestShape& sh = forests_.shapes()[f_idx];
  for (const Mark& m : forests_.store(f_idx).marks_of(v)) {
    const u32 parent = m.level + 1;
    const std::vector<u32>& perm =
        package_perm(f_idx, parent, sh.node_at(parent, t));
    const u32 mine = perm[sh.rank_in_parent(m.level, t)];
    const u32 marked = perm[m.ordinal % sh.fanout(parent)];
    if (mine == marked) return true;
  }
  return false;
}

std::vector<std::optional<std::vector<u64>>> LowScheme::color_batch(
    const std::vector<LowEdge>& edges, u64 t) {
  if (shortcut_) return color_flat(edges, t);

  std::vector<std::optional<std::vector<u64>>> out(edges.size());
  stats_.edges += edges.size();

  // Right pass: advance marks, pick a scheduling vector and vet its palette.
  struct RightState {
    std::optional<u32> f_idx;
    bool blocked = false;
    u64 deg = 0;
  };
  std::unordered_map<u64, RightState> right;
  right.reserve(edges.size());
  for (const LowEdge& e : edges) {
    auto [it, fresh] = right.try_emplace(e.v);
    if (!fresh) {
      WSC_CHECK_MSG(it->second.deg == e.v_batch_deg,
                    "inconsistent batch degree for one vertex");
      continue;
    }
    WSC_CHECK_MSG(e.v_batch_deg >= pow2(r_) && e.v_batch_deg < pow2(r_ + 1),
                  "right endpoint outside its degree band");
    it->second.deg = e.v_batch_deg;
    forests_.prepare(e.v, t);
    it->second.f_idx = forests_.select(e.v, t);
    if (it->second.f_idx)
      it->second.blocked = palette_blocked(*it->second.f_idx, e.v, t);
  }

  // Palette identity and prior use count, once per vector.
  const u64 use_cap = pow2(r_ + 1) / forests_.floor_value();
  std::vector<std::vector<u64>> palette(forests_.shapes().size());
  std::vector<u64> cnt(forests_.shapes().size(), 0);
  for (u32 f_idx = 0; f_idx < palette.size(); ++f_idx) {
    palette[f_idx] = leaf_palette(f_idx, t);
    cnt[f_idx] = palette_count(palette[f_idx]);
    WSC_CHECK_MSG(cnt[f_idx] < use_cap, "palette used beyond its tree share");
  }

  // Left pass in arrival order: the i-th class neighbor of u reserves the
  // kappa-indexed color of v's palette; around each v the earliest edge per
  // tentative color wins.
  std::unordered_map<u64, u64> neighbor_rank;
  std::unordered_map<u64, std::unordered_set<u64>> taken;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    const LowEdge& e = edges[eidx];
    const u64 i = ++neighbor_rank[e.u];
    WSC_CHECK_MSG(i < pow2(l_ + 1), "left endpoint outside its degree band");
    const RightState& st = right.at(e.v);
    if (!st.f_idx) {
      ++stats_.bot_dead_end;
      continue;
    }
    if (st.blocked) {
      ++stats_.bot_palette;
      continue;
    }
    const u32 f_idx = *st.f_idx;
    const u64 kappa = low_kappa(l_, r_, cnt[f_idx], r_shift(e.u), i);
    if (!taken[e.v].insert(kappa).second) {
      ++stats_.bot_dedup;
      continue;
    }
    std::vector<u64> local;
    local.reserve(palette[f_idx].size() + 2);
    local.push_back(f_idx);
    local.insert(local.end(), palette[f_idx].begin(), palette[f_idx].end());
    local.push_back(kappa);
    out[eidx] = std::move(local);
    ++stats_.colored;
  }

  // Close the batch: every vector's current leaf now counts as used, and
  // every right vertex marks the leaf in its chosen forest (palette rejection
  // included; the degree still accumulated there).
  for (u32 f_idx = 0; f_idx < palette.size(); ++f_idx)
    ++palette_counts_[std::move(palette[f_idx])];
  for (const auto& [v, st] : right) forests_.record(v, t, st.deg, st.f_idx);

  return out;
}

std::vector<std::optional<std::vector<u64>>> LowScheme::color_flat(
    const std::vector<LowEdge>& edges, u64 t) {
  std::vector<std::optional<std::vector<u64>>> out(edges.size());
  stats_.edges += edges.size();

  const u64 palette = flat_palette_size();
  std::unordered_map<u64, std::vector<bool>> used_l, used_r;
  for (std::size_t eidx = 0; eidx < edges.size(); ++eidx) {
    const LowEdge& e = edges[eidx];
    std::vector<bool>& fu = used_l[e.u];
    std::vector<bool>& fv = used_r[e.v];
    if (fu.empty()) fu.assign(palette, false);
    if (fv.empty()) fv.assign(palette, false);
    u64 slot = 0;
    while (slot < palette && (fu[slot] || fv[slot])) ++slot;
    WSC_CHECK_MSG(slot < palette, "flat palette exhausted within one batch");
    fu[slot] = fv[slot] = true;
    out[eidx] = std::vector<u64>{t, slot};
    ++stats_.colored;
  }
  return out;
}

}  // namespace wsc
