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

#include "wscolor/expander.hpp"

#include <cmath>

#include "wscolor/prng.hpp"

namespace wsc {

u32 ExpanderParams::stacked_copies(u64 q, u32 b) {
  long double bits = (long double)(b + 2) * std::log2l((long double)q);
  u32 c = u32(std::ceill(bits - 1e-9L));
  return c == 0 ? 1 : c;
}

long double ExpanderParams::log2_arrival_capacity() const {
  long double num = (long double)(b + 2) * std::log2l((long double)(2 * q - 2));
  long double den = std::log2l((long double)q) +
                    (long double)(b + 2) * std::log2l((long double)a) +
                    (long double)(b + 2) * std::log2l((long double)(b + 2));
  return num - den;
}

u128 ExpanderParams::right_degree_bound() const {
  if (a <= b + 1) return 1;
  u128 acc = 1;
  for (u32 i = 0; i < a - b - 1; ++i) acc = sat_mul(acc, q);
  return acc;
}

u64 ExpanderParams::right_size_u64() const {
  u128 acc = 1;
  for (u32 i = 0; i < b + 2; ++i) acc = sat_mul(acc, q);
  WSC_CHECK_MSG(acc <= u128(~u64{0}), "right side too large for integer ids");
  return u64(acc);
}

std::size_t TupleHash::operator()(const std::vector<u64>& t) const {
  u64 h = 0x9e3779b97f4a7c15ULL ^ t.size();
  for (u64 w : t) h = mix64(h ^ w);
  return std::size_t(h);
}

MatchState::MatchState(ExpanderParams params)
    : params_(params), occupied_(params.copies), landed_(params.copies, 0) {
  WSC_CHECK_MSG(params_.copies >= 1, "need at least one copy");
}

void MatchState::occupy(u32 copy, const std::vector<u64>& tuple) {
  WSC_CHECK_MSG(copy >= 1 && copy <= params_.copies, "copy out of range");
  WSC_CHECK_MSG(tuple.size() == params_.b + 2, "tuple width mismatch");
  occupied_[copy - 1].insert(tuple);
}

bool MatchState::is_occupied(u32 copy, const std::vector<u64>& tuple) const {
  return occupied_[copy - 1].count(tuple) > 0;
}

std::optional<MatchResult> MatchState::match(const FieldPoly& f) {
  WSC_CHECK_MSG(f.q() == params_.q, "field mismatch");
  WSC_CHECK_MSG(f.degree() < i64(params_.a), "left polynomial degree too high");
  ++arrivals_;
  for (u32 copy = 1; copy <= params_.copies; ++copy) {
    for (u64 x = 0; x < params_.q; ++x) {
      std::vector<u64> tuple = gamma_point(f, x, params_.b);
      if (occupied_[copy - 1].count(tuple)) continue;
      occupied_[copy - 1].insert(tuple);
      ++landed_[copy - 1];
      MatchResult res;
      res.copy = copy;
      res.tuple = std::move(tuple);
      res.t_index = u64(copy - 1) * params_.q + x + 1;
      return res;
    }
  }
  ++failures_;
  return std::nullopt;
}

u64 right_degree_audit(u64 q, u32 a, u32 b) {
  ExpanderParams p = ExpanderParams::single(q, a, b);
  u128 lefts = 1;
  for (u32 i = 0; i < a; ++i) lefts = sat_mul(lefts, q);
  WSC_CHECK_MSG(lefts <= 1u << 20, "right_degree_audit is exhaustive; params too large");
  std::unordered_map<std::vector<u64>, u64, TupleHash> degree;
  for (u64 id = 0; id < u64(lefts); ++id) {
    FieldPoly f = FieldPoly::from_integer(q, id, a);
    for (u64 x = 0; x < q; ++x) ++degree[gamma_point(f, x, b)];
  }
  u64 max_deg = 0;
  for (const auto& [tuple, d] : degree) max_deg = std::max(max_deg, d);
  WSC_CHECK_MSG(u128(max_deg) <= p.right_degree_bound(),
                "right degree exceeds q^(a-b-1)");
  return max_deg;
}

std::vector<std::optional<KuhnMatch>> kuhn_perfect_match(
    const std::vector<FieldPoly>& lefts, u32 b) {
  std::vector<std::optional<KuhnMatch>> out(lefts.size());
  if (lefts.empty()) return out;
  const u64 q = lefts[0].q();

  // Adjacency: left i -> its q evaluation tuples, x ascending.
  std::vector<std::vector<std::vector<u64>>> nbr(lefts.size());
  std::unordered_map<std::vector<u64>, std::size_t, TupleHash> right_id;
  std::vector<std::vector<std::size_t>> adj(lefts.size());
  for (std::size_t i = 0; i < lefts.size(); ++i) {
    WSC_CHECK_MSG(lefts[i].q() == q, "mixed fields in matching");
    for (u64 x = 0; x < q; ++x) {
      auto tuple = gamma_point(lefts[i], x, b);
      auto [it, fresh] = right_id.try_emplace(tuple, right_id.size());
      (void)fresh;
      adj[i].push_back(it->second);
      nbr[i].push_back(std::move(tuple));
    }
  }

  std::vector<i64> right_to_left(right_id.size(), -1);
  std::vector<std::size_t> left_choice(lefts.size(), 0);
  std::vector<u32> visited(right_id.size(), 0);
  u32 stamp = 0;

  // Standard augmenting search; deterministic because lefts arrive in order
  // and neighbors are scanned x ascending.
  auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t k = 0; k < adj[i].size(); ++k) {
      std::size_t rv = adj[i][k];
      if (visited[rv] == stamp) continue;
      visited[rv] = stamp;
      if (right_to_left[rv] < 0 || self(self, std::size_t(right_to_left[rv]))) {
        right_to_left[rv] = i64(i);
        left_choice[i] = k;
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < lefts.size(); ++i) {
    ++stamp;
    augment(augment, i);
  }
  // Augmenting can re-route earlier lefts; read final assignments off the
  // right-side table.
  for (std::size_t rv = 0; rv < right_to_left.size(); ++rv) {
    if (right_to_left[rv] < 0) continue;
    std::size_t i = std::size_t(right_to_left[rv]);
    std::size_t k = left_choice[i];
    WSC_CHECK_MSG(adj[i][k] == rv, "matching bookkeeping out of sync");
    out[i] = KuhnMatch{k, nbr[i][k]};
  }
  return out;
}

}  // namespace wsc
