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

#include "wscolor/konig.hpp"

#include <limits>
#include <unordered_map>

namespace wsc {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Per-vertex table mapping color -> incident edge index (kNone when free).
using Slots = std::unordered_map<u64, std::vector<std::size_t>>;

std::vector<std::size_t>& slots_for(Slots& side, u64 vertex, u32 num_colors) {
  auto [it, inserted] = side.try_emplace(vertex);
  if (inserted) it->second.assign(num_colors, kNone);
  return it->second;
}

u32 first_free(const std::vector<std::size_t>& slots) {
  for (u32 c = 0; c < u32(slots.size()); ++c)
    if (slots[c] == kNone) return c;
  WSC_CHECK_MSG(false, "vertex has no free color; degree exceeds color count");
}

}  // namespace

u32 bipartite_max_degree(const std::vector<KonigEdge>& edges) {
  std::unordered_map<u64, u32> dl, dr;
  u32 best = 0;
  for (const KonigEdge& e : edges) {
    best = std::max(best, ++dl[e.left]);
    best = std::max(best, ++dr[e.right]);
  }
  return best;
}

std::vector<u32> konig_color(const std::vector<KonigEdge>& edges) {
  const u32 num_colors = bipartite_max_degree(edges);
  std::vector<u32> color(edges.size(), 0);
  Slots left, right;

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const u64 u = edges[i].left;
    const u64 v = edges[i].right;
    auto& lu = slots_for(left, u, num_colors);
    auto& rv = slots_for(right, v, num_colors);

    u32 pick = num_colors;
    for (u32 c = 0; c < num_colors; ++c) {
      if (lu[c] == kNone && rv[c] == kNone) {
        pick = c;
        break;
      }
    }

    if (pick == num_colors) {
      // No mutually free color. Take alpha free at u and beta free at v, and
      // flip the alpha/beta alternating path that starts at v. The component
      // is a simple path (each vertex meets alpha and beta at most once) and
      // cannot end at u, so afterwards alpha is free at both endpoints.
      const u32 alpha = first_free(lu);
      const u32 beta = first_free(rv);
      std::vector<std::size_t> path;
      u64 at = v;
      bool on_right = true;
      u32 follow = alpha;
      while (true) {
        const Slots& side = on_right ? right : left;
        auto it = side.find(at);
        std::size_t next = (it == side.end()) ? kNone : it->second[follow];
        if (next == kNone) break;
        path.push_back(next);
        WSC_CHECK_MSG(path.size() <= edges.size(), "alternating path revisits an edge");
        at = on_right ? edges[next].left : edges[next].right;
        on_right = !on_right;
        follow = (follow == alpha) ? beta : alpha;
      }
      for (std::size_t e : path) {
        left.at(edges[e].left)[color[e]] = kNone;
        right.at(edges[e].right)[color[e]] = kNone;
      }
      for (std::size_t e : path) {
        color[e] = (color[e] == alpha) ? beta : alpha;
        left.at(edges[e].left)[color[e]] = e;
        right.at(edges[e].right)[color[e]] = e;
      }
      pick = alpha;
    }

    left.at(u)[pick] = i;
    right.at(v)[pick] = i;
    color[i] = pick;
  }
  return color;
}

}  // namespace wsc
