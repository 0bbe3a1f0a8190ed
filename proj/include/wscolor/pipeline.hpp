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
#include <vector>

#include "wscolor/budget.hpp"
#include "wscolor/color_id.hpp"
#include "wscolor/common.hpp"
#include "wscolor/stream_io.hpp"

namespace wsc {

// End-to-end orchestration: unknown-cap doubling epochs, parallel-edge
// pair reduction, highest-differing-bit bipartization with per-level batch
// clocks, per-class low/high scheme dispatch, and the uncolored-residual
// recursion closed by an in-memory first-fit finisher.

enum class Mode { kRand, kDet };

struct PipelineConfig {
  Mode mode = Mode::kRand;
  long double epsilon = 0.5L;
  u64 seed = 0;
  u64 batch_size = 0;  // 0 = the header vertex count; smaller values void
                       // the closed-form budget certificate
  bool multigraph = false;
  bool force_det_path = false;  // reduced-stretch expander path at desk scale
  bool instrument = false;      // collect space/scheme reports
  bool validate_marks = false;  // run the structural validators every batch
  u64 memory_budget_c = 8;      // greedy finisher threshold: c * n edges
  u64 max_depth = 0;            // 0 = the statistical cap 50*log2(cap)/delta
  std::string scratch_dir;      // empty = residual spools stay in memory
  u64 spool_memory_edges = u64(1) << 20;  // spill threshold per spool
};

struct SchemeReport {
  ColorNamespace ns;
  u64 edges = 0;
  u64 colored = 0;
  u64 bots = 0;
  u64 batches = 0;
};

struct SpaceReport {
  ColorNamespace ns;
  u32 f_idx = 0;
  u32 height = 0;
  u64 high_water = 0;  // max over time of the store's live mark count
  u64 bound = 0;       // 2^{height+3} * n
};

struct PipelineStats {
  u64 n = 0;
  u64 batch_size = 0;
  u64 edges_in = 0;
  u64 colors_emitted = 0;
  u64 greedy_edges = 0;
  u32 epochs = 0;
  u32 layers = 0;     // deepest parallel-edge reduction layer + 1
  u32 max_depth = 0;  // deepest residual recursion instantiated
  // Live mark entries summed over every store, max over time, plus the
  // aggregate ceiling (sum of per-store bounds) and the store count that
  // multiplies into it.
  u64 mark_live_high_water = 0;
  u64 store_count = 0;
  u128 space_bound_total = 0;
  std::vector<SchemeReport> schemes;
  std::vector<SpaceReport> space;  // instrument mode only
  std::vector<NamespaceBudgetInput> minted;
};

// Bipartization coordinate of an edge: the index of the highest bit where
// the endpoint ids differ. Within one level, the bit's value 2-colors the
// touched vertices; side 0 is listed first in the returned orientation.
u32 bipartite_level(u64 u, u64 v);

// Colors `input` onto `sink`, one record per edge. Throws input_error on
// malformed or cap-violating streams and contract_error on internal
// invariant breaches (the diagnostic for a budget/structure bug, never an
// input condition).
PipelineStats run_pipeline(std::istream& input, RecordSink& sink,
                           const PipelineConfig& cfg);

}  // namespace wsc
