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

#include "wscolor/common.hpp"

namespace wsc {

// Shared knobs of the deterministic schemes. The stretch factor `lambda`
// sizes every expander's right side; its native value is so large that real
// inputs take the buffered fallback instead, so tests inject a reduced value
// (n * q^2 by default) that keeps the matchers exercised and injective.
struct DetParams {
  long double dexp = 0;  // epsilon^2 / 10, the field-size exponent
  u64 q = 2;             // field size: smallest prime in [Delta^dexp, 2*Delta^dexp)
  u128 lambda = 0;
  bool reduced_lambda = false;

  // Reduced lambda used when the expander path is forced: n * q^2 makes every
  // single-copy footprint injective per evaluation point, so the per-batch
  // perfect matchings below never fail.
  static u128 forced_lambda(u64 n, u64 q) { return u128(n) * q * q; }
};

// Whether the degree cap is large enough relative to n that the expander
// path's guarantees hold natively: Delta >= (log2 n)^(200 / epsilon^4).
// Everything below that stores the graph and colors it in memory.
bool det_path_native(u64 delta_pow2, long double epsilon, u64 n);

DetParams make_det_params(u64 delta_pow2, long double epsilon, u64 n,
                          std::optional<u128> lambda_override);

// Smallest e with q^e >= x (x >= 1); the digit width of x - 1 in base q.
u32 ceil_log_base(u64 q, u128 x);

// q^e, saturating at the u128 maximum.
u128 pow_sat(u64 q, u32 e);

}  // namespace wsc
