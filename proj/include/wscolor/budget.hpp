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

#include "wscolor/color_id.hpp"
#include "wscolor/common.hpp"

namespace wsc {

// Inputs for one namespace's closed-form color capacity. The pipeline records
// one line per namespace it minted colors in; the verifier re-evaluates the
// capacity from these numbers and checks the distinct-color tally against it.
struct NamespaceBudgetInput {
  ColorNamespace ns;
  u64 delta = 0;        // degree cap of the namespace's epoch (power of two)
  u64 batches = 0;      // level batches processed under this namespace
  u64 batch_bound = 0;  // batch-count bound used to enumerate vectors
  long double epsilon = 0;
  u64 q = 0;            // deterministic schemes only
  u128 lambda = 0;      // deterministic schemes only
};

// Capacity of one scheme instance, saturating at the u128 maximum.
//
// Forest scheme: sum over frequency vectors f of
//   25 * 2^{l+r+2} * prod_i (5 f_i) * ceil(delta / (2^{r+1} prod_{i<h} f_i)).
u128 rand_low_budget(u64 delta, long double epsilon, u32 l, u32 r,
                     u64 batch_bound);
// Bucket scheme: (delta/2^l) * (delta/2^r) * (4 + ceil(2^{l+r+3}/delta)).
u128 rand_high_budget(u64 delta, u32 l, u32 r);
// Flat per-batch palette: (2^{l+1} + 2^{r+1}) per batch.
u128 shortcut_budget(u32 l, u32 r, u64 batches);
// Deterministic forest scheme: sum over vectors f of
//   2^{l+1} * q^{b0+3} * prod_i (lambda_i q^{b_i+2}) * tree count,
// with b_i the stretch digits of lambda * f_i and lambda_i the stacked-copy
// multiple of lambda.
u128 det_low_budget(u64 delta, long double epsilon, u32 l, u32 r,
                    u64 batch_bound, u64 q, u128 lambda);
// Deterministic bucket scheme: q^{b1+2} * q^{b2+2} * ceil(2^{l+r+2}/delta).
u128 det_high_budget(u64 delta, u64 q, u128 lambda, u32 l, u32 r);
// In-memory finisher: first-fit needs at most 2*delta - 1 colors.
u128 greedy_budget(u64 delta);

// Dispatch on the namespace's scheme, times 2^{mdepth} for the pair
// reduction's color doubling at each multigraph layer above it.
u128 namespace_budget(const NamespaceBudgetInput& in);

}  // namespace wsc
