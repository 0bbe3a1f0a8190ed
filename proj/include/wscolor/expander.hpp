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

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wscolor/field_poly.hpp"

namespace wsc {

// Bipartite multiplicity-code expander. Left vertices are polynomials of
// degree < a over F_q, a left vertex f is adjacent to the evaluation tuples
// (x, f(x), H^1 f(x), ..., H^b f(x)) for every x; the right side is F_q^{b+2},
// optionally stacked into disjoint copies for online matching.
struct ExpanderParams {
  u64 q = 2;
  u32 a = 1;
  u32 b = 0;
  u32 copies = 1;

  // Number of disjoint right-side copies the online matcher stacks:
  // ceil((b+2) * log2 q).
  static u32 stacked_copies(u64 q, u32 b);

  static ExpanderParams single(u64 q, u32 a, u32 b) { return {q, a, b, 1}; }
  static ExpanderParams stacked(u64 q, u32 a, u32 b) {
    return {q, a, b, stacked_copies(q, b)};
  }

  // Guarantee regime of the expansion lemma: 15 <= b+2 <= a <= q. Outside it
  // the structure still works, but matchings may fail (callers must tolerate
  // and flag that).
  bool lemma_precondition_met() const { return 15 <= b + 2 && b + 2 <= a && u64(a) <= q; }

  // Arrival capacity of the online matcher in log2, i.e.
  // log2( (2q-2)^{b+2} / (q * a^{b+2} * (b+2)^{b+2}) ).
  long double log2_arrival_capacity() const;

  // Right-degree upper bound q^(a-b-1), saturated.
  u128 right_degree_bound() const;

  // Number of right vertices per copy, q^(b+2); requires it to fit in u64.
  u64 right_size_u64() const;
};

struct TupleHash {
  std::size_t operator()(const std::vector<u64>& t) const;
};
using TupleSet = std::unordered_set<std::vector<u64>, TupleHash>;

struct MatchResult {
  u32 copy = 0;             // 1-based copy that accepted the arrival
  std::vector<u64> tuple;   // right vertex within the copy
  u64 t_index = 0;          // 1-based position in (copy asc, x asc) adjacency order
};

// Occupancy state of the online matcher. Right-side storage is sparse: the
// right side can be astronomically large, only taken vertices are recorded.
class MatchState {
 public:
  explicit MatchState(ExpanderParams params);

  const ExpanderParams& params() const { return params_; }

  // Pre-occupies a right vertex (used to seed a scope with existing pairs).
  void occupy(u32 copy, const std::vector<u64>& tuple);

  bool is_occupied(u32 copy, const std::vector<u64>& tuple) const;

  // Greedy online step: smallest copy, then smallest x, whose evaluation
  // tuple is free. nullopt when every neighbor in every copy is taken.
  std::optional<MatchResult> match(const FieldPoly& f);

  u64 arrivals() const { return arrivals_; }
  u64 failures() const { return failures_; }
  // landed[j] counts arrivals accepted by copy j+1; used for the halving law.
  const std::vector<u64>& landed_per_copy() const { return landed_; }

 private:
  ExpanderParams params_;
  std::vector<TupleSet> occupied_;  // one set per copy
  std::vector<u64> landed_;
  u64 arrivals_ = 0;
  u64 failures_ = 0;
};

// Exhaustive right-degree histogram over all q^a left polynomials; feasible
// only for tiny parameters. Returns the maximum right degree.
u64 right_degree_audit(u64 q, u32 a, u32 b);

// Perfect matching of `lefts` into a single-copy expander right side via
// augmenting paths (Kuhn). Entry i of the result is nullopt when left i could
// not be matched; otherwise (x, tuple) with tuple = Gamma(lefts[i], x).
struct KuhnMatch {
  u64 x = 0;
  std::vector<u64> tuple;
};
std::vector<std::optional<KuhnMatch>> kuhn_perfect_match(
    const std::vector<FieldPoly>& lefts, u32 b);

}  // namespace wsc
