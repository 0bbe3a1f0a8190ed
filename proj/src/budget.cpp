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

#include "wscolor/budget.hpp"

#include <algorithm>

#include "wscolor/det_params.hpp"
#include "wscolor/expander.hpp"
#include "wscolor/forest.hpp"
#include "wscolor/rand_high.hpp"

namespace wsc {

u128 rand_low_budget(u64 delta, long double epsilon, u32 l, u32 r,
                     u64 batch_bound) {
  WSC_CHECK_MSG(l < 60 && r < 60, "class exponents out of range");
  u128 total = 0;
  for (const FreqVector& f : enumerate_freq_vectors(delta, epsilon, r, batch_bound)) {
    const ForestShape sh = make_shape(r, f);
    u128 per_tree = u128(25) << (l + r + 2);  // package size
    for (u64 fi : f) per_tree = sat_mul(per_tree, u128(5) * fi);
    const u64 trees = ceil_div(delta, sh.span(sh.height()));
    total += sat_mul(per_tree, trees);
    if (total < per_tree) return ~u128(0);  // clamp on wrap
  }
  return total;
}

u128 rand_high_budget(u64 delta, u32 l, u32 r) {
  WSC_CHECK_MSG(l < 60 && r < 60, "class exponents out of range");
  const u128 rows = delta / pow2(l);
  const u128 cols = delta / pow2(r);
  return sat_mul(sat_mul(rows, cols), high_bucket_cap(delta, l, r));
}

u128 shortcut_budget(u32 l, u32 r, u64 batches) {
  WSC_CHECK_MSG(l < 60 && r < 60, "class exponents out of range");
  return sat_mul(u128(pow2(l + 1)) + pow2(r + 1), batches);
}

u128 det_low_budget(u64 delta, long double epsilon, u32 l, u32 r,
                    u64 batch_bound, u64 q, u128 lambda) {
  WSC_CHECK_MSG(l < 60 && r < 60, "class exponents out of range");
  const u32 b0 = ceil_log_base(q, sat_mul(lambda, pow2(r + 1)));
  u128 total = 0;
  for (const FreqVector& f : enumerate_freq_vectors(delta, epsilon, r, batch_bound)) {
    const ForestShape sh = make_shape(r, f);
    u128 per_tree = sat_mul(pow2(l + 1), pow_sat(q, b0 + 3));
    for (u64 fi : f) {
      const u32 bi = ceil_log_base(q, sat_mul(lambda, fi));
      const u128 lambda_i = sat_mul(lambda, ExpanderParams::stacked_copies(q, bi));
      per_tree = sat_mul(per_tree, sat_mul(lambda_i, pow_sat(q, bi + 2)));
    }
    const u64 trees = ceil_div(delta, sh.span(sh.height()));
    total += sat_mul(per_tree, trees);
    if (total < per_tree) return ~u128(0);  // clamp on wrap
  }
  return total;
}

u128 det_high_budget(u64 delta, u64 q, u128 lambda, u32 l, u32 r) {
  WSC_CHECK_MSG(l < 60 && r < 60, "class exponents out of range");
  const u128 s_space = pow_sat(q, ceil_log_base(q, sat_mul(lambda, delta / pow2(l))) + 2);
  const u128 t_space = pow_sat(q, ceil_log_base(q, sat_mul(lambda, delta / pow2(r))) + 2);
  return sat_mul(sat_mul(s_space, t_space), ceil_div(pow2(l + r + 2), delta));
}

u128 greedy_budget(u64 delta) { return 2 * u128(delta) - 1; }

u128 namespace_budget(const NamespaceBudgetInput& in) {
  // Low schemes color through role-normalized bands (the forest always hangs
  // off the side with the larger exponent), so their budgets are evaluated
  // over the normalized pair no matter which side of the class was larger.
  const u32 lo = std::min(in.ns.l, in.ns.r);
  const u32 hi = std::max(in.ns.l, in.ns.r);
  u128 base = 0;
  switch (in.ns.scheme) {
    case Scheme::kRandLow:
      base = rand_low_budget(in.delta, in.epsilon, lo, hi, in.batch_bound);
      break;
    case Scheme::kRandHigh:
      base = rand_high_budget(in.delta, in.ns.l, in.ns.r);
      break;
    case Scheme::kShortcut:
      base = shortcut_budget(in.ns.l, in.ns.r, in.batches);
      break;
    case Scheme::kDetLow:
      base = det_low_budget(in.delta, in.epsilon, lo, hi,
                            in.batch_bound, in.q, in.lambda);
      break;
    case Scheme::kDetHigh:
      base = det_high_budget(in.delta, in.q, in.lambda, in.ns.l, in.ns.r);
      break;
    case Scheme::kGreedy:
      base = greedy_budget(in.delta);
      break;
  }
  return sat_mul(base, u128(1) << std::min<u32>(in.ns.mdepth, 127));
}

}  // namespace wsc
