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
#include <string>
#include <utility>
#include <vector>

#include "wscolor/common.hpp"
#include "wscolor/stream_io.hpp"

namespace wsc {

enum class GenKind {
  kRandomBipartite,  // rounds of random pairings, simple
  kUnbalancedStars,  // blocks of full-degree stars on one side, leaves on the other
  kDRegular,         // blocks that are exactly d-regular bipartite graphs
  kMultigraph,       // random pairings with planted parallel edges
};

enum class GenOrder {
  kSorted,  // adversarial: each block sorted lexicographically
  kRandom,  // each block shuffled
};

bool gen_kind_from_string(const std::string& s, GenKind* out);
bool gen_order_from_string(const std::string& s, GenOrder* out);

struct GenSpec {
  GenKind kind = GenKind::kRandomBipartite;
  u64 n = 0;      // vertex-id space; sides split at n/2
  u64 delta = 0;  // degree cap the stream must respect (with multiplicity)
  u64 seed = 0;
  GenOrder order = GenOrder::kRandom;
  u64 d = 0;             // per-block degree for kDRegular (0 = min(8, delta))
  u64 target_edges = 0;  // 0 = kind-specific default volume
};

struct GenResult {
  StreamHeader header;                      // n, m, measured delta
  std::vector<std::pair<u32, u32>> edges;   // arrival order
  u64 block = 0;  // natural batch size: per-block structure holds at this size
};

// Deterministic in `spec` (including seed). Throws input_error on infeasible
// specs, e.g. a d-regular block with d*n odd.
GenResult generate_stream(const GenSpec& spec);

// "n m delta" header line followed by one "u v" line per edge.
void write_stream(std::ostream& os, const GenResult& gen);

}  // namespace wsc
