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

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wsc {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Contract violation: unrecoverable, carries a diagnostic message.
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// Input/config problem attributable to the caller (bad file, bad flag).
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
[[noreturn]] inline void check_failed(const char* expr, const char* file, int line,
                                      const std::string& msg) {
  std::ostringstream os;
  os << "check failed: " << expr << " at " << file << ":" << line;
  if (!msg.empty()) os << " (" << msg << ")";
  throw contract_error(os.str());
}
}  // namespace detail

#define WSC_CHECK(cond)                                                           \
  do {                                                                            \
    if (!(cond)) ::wsc::detail::check_failed(#cond, __FILE__, __LINE__, "");      \
  } while (0)

#define WSC_CHECK_MSG(cond, msg)                                                  \
  do {                                                                            \
    if (!(cond)) ::wsc::detail::check_failed(#cond, __FILE__, __LINE__, (msg));   \
  } while (0)

// floor(log2 x) for x >= 1.
inline u32 floor_log2(u64 x) {
  u32 r = 0;
  while (x >>= 1) ++r;
  return r;
}

// ceil(log2 x) for x >= 1.
inline u32 ceil_log2(u64 x) {
  if (x <= 1) return 0;
  return floor_log2(x - 1) + 1;
}

inline u64 pow2(u32 k) { return u64{1} << k; }

inline bool is_pow2(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

// Smallest power of two >= x (x >= 1).
inline u64 ceil_pow2(u64 x) { return pow2(ceil_log2(x)); }

inline u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

// Saturating multiply for budget arithmetic; budgets can be astronomically
// large while actual color counts stay small, so saturation is harmless.
inline u128 sat_mul(u128 a, u128 b) {
  if (a == 0 || b == 0) return 0;
  const u128 max = ~u128{0};
  if (a > max / b) return max;
  return a * b;
}

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

}  // namespace wsc
