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
#include <vector>

#include "wscolor/common.hpp"

namespace wsc {

// One edge of a bipartite multigraph handed to the offline colorer. The two
// endpoint id spaces are independent; equal numeric ids on opposite sides
// denote different vertices.
struct KonigEdge {
  u64 left = 0;
  u64 right = 0;
};

// Maximum number of edges sharing an endpoint, or 0 for an empty input.
u32 bipartite_max_degree(const std::vector<KonigEdge>& edges);

// Properly edge-colors a bipartite multigraph with exactly max-degree colors
// via alternating-path recoloring: each edge either takes a color free at
// both ends or swaps colors along the unique path alternating between one
// color free on the left end and one free on the right. Returns one color in
// [0, max degree) per input edge, deterministically.
std::vector<u32> konig_color(const std::vector<KonigEdge>& edges);

}  // namespace wsc
