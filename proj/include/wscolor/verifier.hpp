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

namespace wsc {

// The checker deliberately re-parses both streams with its own tokenizer and
// rebuilds incidence from scratch; the only thing it shares with the coloring
// side is the serialized record format (ColorId::parse) and the budget
// formulas it is checking against.

struct VerifyOptions {
  bool allow_bot = false;       // unresolved records fail the check unless set
  std::size_t max_errors = 16;  // cap on collected messages
};

struct VerifyReport {
  bool ok = false;
  u64 n = 0;
  u64 edges = 0;
  u64 records = 0;
  u64 colored = 0;
  u64 bots = 0;
  u64 missing = 0;
  u64 duplicate_records = 0;
  u64 conflicts = 0;  // incident edge pairs sharing a color
  std::vector<std::string> errors;
};

// Reads the graph stream ("n [m] [delta]" header, then "u v" lines) and the
// record stream ("seq color" or "seq BOT" lines); checks that every edge got
// exactly one record and that no two edges sharing an endpoint carry equal
// colors. Parallel edges share both endpoints, so multigraph inputs are
// covered by the same rule. Uses O(m) memory.
VerifyReport verify_proper(std::istream& graph, std::istream& records,
                           const VerifyOptions& opt = {});

struct NamespaceTally {
  ColorNamespace ns;
  u64 distinct_colors = 0;
  u128 budget = 0;
  bool known = false;  // the run declared this namespace
  bool within = false;
};

struct BudgetReport {
  bool ok = false;
  u64 colored = 0;
  std::vector<NamespaceTally> tallies;
  std::vector<std::string> errors;
};

// Tallies distinct colors per namespace in the record stream and compares
// each against the ceiling recomputed from that namespace's declared
// parameters. Namespaces that appear in records but were never declared are
// errors.
BudgetReport verify_budget(std::istream& records,
                           const std::vector<NamespaceBudgetInput>& minted);

}  // namespace wsc
