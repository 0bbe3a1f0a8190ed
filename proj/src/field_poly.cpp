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

#include "wscolor/field_poly.hpp"

#include <algorithm>

namespace wsc {

FieldPoly::FieldPoly(u64 q, std::vector<u64> coeffs) : q_(q), coeffs_(std::move(coeffs)) {
  WSC_CHECK_MSG(q_ >= 2, "field order must be >= 2");
  for (u64& c : coeffs_) c %= q_;
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

u64 FieldPoly::eval(u64 x) const {
  x %= q_;
  u64 acc = 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = mod_add(mod_mul(acc, x, q_), coeffs_[k], q_);
  return acc;
}

FieldPoly FieldPoly::from_integer(u64 q, u64 value, u32 max_digits) {
  std::vector<u64> c;
  c.reserve(max_digits);
  for (u32 i = 0; i < max_digits; ++i) {
    c.push_back(value % q);
    value /= q;
  }
  WSC_CHECK_MSG(value == 0, "integer does not fit in the requested digit count");
  return FieldPoly(q, std::move(c));
}

u64 mod_pow(u64 base, u64 exp, u64 q) {
  base %= q;
  u64 acc = 1 % q;
  while (exp > 0) {
    if (exp & 1) acc = mod_mul(acc, base, q);
    base = mod_mul(base, base, q);
    exp >>= 1;
  }
  return acc;
}

u64 mod_inv(u64 a, u64 q) {
  // q prime, a != 0 mod q.
  a %= q;
  WSC_CHECK_MSG(a != 0, "no inverse of 0");
  return mod_pow(a, q - 2, q);
}

FieldPoly hasse_derivative(const FieldPoly& f, u32 i) {
  const u64 q = f.q();
  if (i == 0) return f;
  if (f.degree() < i64(i)) return FieldPoly(q, {});
  const std::size_t deg = std::size_t(f.degree());
  // Binomials C(k, i) mod q via Pascal's triangle; exact (no division), so
  // correct even when i >= char(F_q).
  std::vector<u64> binom(deg + 1, 0);  // binom[k] = C(k, i) mod q
  std::vector<u64> prev(deg + 1, 1);   // C(k, 0)
  for (u32 j = 1; j <= i; ++j) {
    std::vector<u64> cur(deg + 1, 0);
    for (std::size_t k = j; k <= deg; ++k)
      cur[k] = mod_add(cur[k - 1], prev[k - 1], q);
    prev = std::move(cur);
  }
  binom = std::move(prev);
  std::vector<u64> out(deg + 1 - i, 0);
  for (std::size_t k = i; k <= deg; ++k) out[k - i] = mod_mul(binom[k], f.coeff(k), q);
  return FieldPoly(q, std::move(out));
}

std::vector<u64> gamma_point(const FieldPoly& f, u64 x, u32 b) {
  // f(X) = sum_i H^i f(x) (X-x)^i, so b+1 rounds of synthetic division by
  // (X-x) peel off the Hasse evaluations as remainders. O(deg * (b+2)).
  const u64 q = f.q();
  x %= q;
  std::vector<u64> out;
  out.reserve(b + 2);
  out.push_back(x);
  std::vector<u64> work = f.coeffs();
  for (u32 i = 0; i <= b; ++i) {
    if (work.empty()) {
      out.push_back(0);
      continue;
    }
    u64 carry = 0;
    for (std::size_t k = work.size(); k-- > 0;) {
      u64 next = mod_add(work[k], mod_mul(carry, x, q), q);
      work[k] = carry;  // quotient coefficient for degree k
      carry = next;
    }
    out.push_back(carry);  // remainder = H^i f(x)
    while (!work.empty() && work.back() == 0) work.pop_back();
  }
  return out;
}

bool is_prime_u64(u64 x) {
  if (x < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % p == 0) return x == p;
  }
  u64 d = x - 1;
  u32 s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven deterministic witness set for all 64-bit inputs.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 v = mod_pow(a, d, x);
    if (v == 1 || v == x - 1) continue;
    bool composite = true;
    for (u32 r = 1; r < s; ++r) {
      v = mod_mul(v, v, x);
      if (v == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 prime_in_range(u64 lo, u64 hi) {
  WSC_CHECK_MSG(lo >= 2, "prime_in_range requires lo >= 2");
  WSC_CHECK_MSG(hi >= 2 * lo, "prime_in_range requires hi >= 2*lo");
  for (u64 x = lo; x < hi; ++x) {
    if (is_prime_u64(x)) return x;
  }
  throw contract_error("no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "), violating Bertrand's postulate");
}

u64 tuple_to_index(const std::vector<u64>& tuple, u64 q) {
  u64 acc = 0;
  for (u64 t : tuple) {
    WSC_CHECK_MSG(t < q, "tuple coordinate out of range");
    acc = acc * q + t;
  }
  return acc;
}

std::vector<u64> index_to_tuple(u64 index, u64 q, u32 width) {
  std::vector<u64> out(width, 0);
  for (u32 i = width; i-- > 0;) {
    out[i] = index % q;
    index /= q;
  }
  WSC_CHECK_MSG(index == 0, "index does not fit in tuple width");
  return out;
}

}  // namespace wsc
