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

#include <vector>

#include "wscolor/common.hpp"

namespace wsc {

// Dense univariate polynomial over the prime field F_q, coefficients in
// ascending degree order, always reduced mod q. Trailing zeros are trimmed so
// degree() is exact.
class FieldPoly {
 public:
  FieldPoly(u64 q, std::vector<u64> coeffs);

  u64 q() const { return q_; }
  const std::vector<u64>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  i64 degree() const { return i64(coeffs_.size()) - 1; }

  u64 coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0; }

  u64 eval(u64 x) const;

  bool operator==(const FieldPoly& o) const = default;

  // Polynomial whose base-q digits are `value`, lowest digit first:
  // value = sum coeff_k q^k. Injective for value < q^max_digits.
  static FieldPoly from_integer(u64 q, u64 value, u32 max_digits);

 private:
  u64 q_;
  std::vector<u64> coeffs_;
};

inline u64 mod_mul(u64 a, u64 b, u64 q) { return u64(u128(a) * b % q); }
inline u64 mod_add(u64 a, u64 b, u64 q) { return (a + b) % q; }
u64 mod_pow(u64 base, u64 exp, u64 q);
u64 mod_inv(u64 a, u64 q);

// i-th Hasse derivative: coefficient of X^{k-i} is C(k, i) * c_k (mod q).
// Unlike the i-fold classical derivative this does not vanish for i >= char.
FieldPoly hasse_derivative(const FieldPoly& f, u32 i);

// Evaluation vector (x, f(x), H^1 f(x), ..., H^b f(x)) in F_q^{b+2}; the
// multiplicity-code footprint of f at x.
std::vector<u64> gamma_point(const FieldPoly& f, u64 x, u32 b);

// Deterministic 64-bit Miller-Rabin.
bool is_prime_u64(u64 x);

// Smallest prime in [lo, hi); requires lo >= 2 and hi >= 2*lo so Bertrand's
// postulate guarantees existence.
u64 prime_in_range(u64 lo, u64 hi);

// Base-q tuple <-> integer codecs (tuple index 0 is the most significant
// digit so ascending-x gamma tuples sort by their leading coordinate).
u64 tuple_to_index(const std::vector<u64>& tuple, u64 q);
std::vector<u64> index_to_tuple(u64 index, u64 q, u32 width);

}  // namespace wsc
