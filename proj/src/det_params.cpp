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

#include "wscolor/det_params.hpp"

#include <cmath>
#include <limits>

#include "wscolor/field_poly.hpp"

namespace wsc {

bool det_path_native(u64 delta_pow2, long double epsilon, u64 n) {
  WSC_CHECK(epsilon > 0 && n >= 2);
  const long double need =
      (200.0L / (epsilon * epsilon * epsilon * epsilon)) *
      std::log2(std::log2((long double)n));
  return (long double)floor_log2(delta_pow2) >= need;
}

DetParams make_det_params(u64 delta_pow2, long double epsilon, u64 n,
                          std::optional<u128> lambda_override) {
  WSC_CHECK_MSG(is_pow2(delta_pow2), "degree cap must be a power of two");
  WSC_CHECK(epsilon > 0 && epsilon <= 1);
  DetParams p;
  p.dexp = epsilon * epsilon / 10.0L;
  const u64 lo =
      std::max<u64>(2, (u64)std::ceil(std::pow((long double)delta_pow2, p.dexp)));
  p.q = prime_in_range(lo, 2 * lo);
  if (lambda_override) {
    p.lambda = *lambda_override;
    p.reduced_lambda = true;
    WSC_CHECK_MSG(p.lambda >= 2, "stretch factor must be at least 2");
  } else {
    // ceil(log2(n)^(2+3/d) * (2+3/d)^(2+3/d)); saturate once it leaves u128
    // range -- native runs at that magnitude never reach the expander path.
    const long double e = 2.0L + 3.0L / p.dexp;
    const long double bits =
        e * (std::log2(std::log2((long double)n)) + std::log2(e));
    if (bits >= 127.0L) {
      p.lambda = ~u128(0);
    } else {
      const long double v =
          std::pow(std::log2((long double)n), e) * std::pow(e, e);
      p.lambda = (u128)std::ceil(v);
    }
  }
  return p;
}

u32 ceil_log_base(u64 q, u128 x) {
  WSC_CHECK(q >= 2 && x >= 1);
  u32 e = 0;
  u128 pw = 1;
  while (pw < x) {
    ++e;
    WSC_CHECK_MSG(e <= 256, "digit width runaway");
    if (pw > ~u128(0) / q) return e;  // q^e already exceeds any u128 x
    pw *= q;
  }
  return e;
}

u128 pow_sat(u64 q, u32 e) {
  u128 r = 1;
  for (u32 i = 0; i < e; ++i) {
    if (r > ~u128(0) / q) return ~u128(0);
    r *= q;
  }
  return r;
}

}  // namespace wsc
