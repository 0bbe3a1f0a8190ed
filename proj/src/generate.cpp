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

#include "wscolor/generate.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "wscolor/prng.hpp"

namespace wsc {

namespace {

using EdgeList = std::vector<std::pair<u32, u32>>;

// Arrival-order policy is applied to each structural block independently so
// that per-block properties (stars, regularity) survive reordering.
void order_block(EdgeList& edges, std::size_t begin, GenOrder order,
                 std::mt19937_64& rng) {
  if (begin >= edges.size()) return;
  if (order == GenOrder::kSorted) {
    std::sort(edges.begin() + std::ptrdiff_t(begin), edges.end());
  } else {
    // Shuffle the tail [begin, end) in place.
    for (std::size_t len = edges.size() - begin; len > 1; --len) {
      const std::size_t j = std::size_t((u128(rng()) * len) >> 64);
      std::swap(edges[begin + len - 1], edges[begin + j]);
    }
  }
}

std::vector<u32> random_permutation(u64 size, std::mt19937_64& rng) {
  std::vector<u32> pi(size);
  std::iota(pi.begin(), pi.end(), u32(0));
  shuffle_in_place(pi, rng);
  return pi;
}

u64 measured_max_degree(const EdgeList& edges) {
  std::unordered_map<u32, u64> deg;
  u64 best = 0;
  for (const auto& [u, v] : edges) {
    best = std::max(best, ++deg[u]);
    best = std::max(best, ++deg[v]);
  }
  return best;
}

GenResult finish(const GenSpec& spec, EdgeList edges, u64 block) {
  const u64 measured = measured_max_degree(edges);
  WSC_CHECK_MSG(measured <= spec.delta,
                "generated stream exceeds its declared degree cap");
  GenResult out;
  out.header.n = spec.n;
  out.header.m = edges.size();
  out.header.delta = spec.delta;
  out.edges = std::move(edges);
  out.block = block;
  return out;
}

GenResult gen_random_bipartite(const GenSpec& spec, KeyedPrf prf) {
  const u64 left = spec.n / 2;
  const u64 right = spec.n - left;
  const u64 target = spec.target_edges ? spec.target_edges : 4 * spec.n;
  const u64 rounds =
      std::max<u64>(1, std::min(spec.delta, ceil_div(target, left)));
  EdgeList edges;
  edges.reserve(rounds * left);
  std::unordered_set<u64> seen;
  for (u64 r = 0; r < rounds; ++r) {
    auto rng = prf.stream({0x726f756e64ULL, r});
    const std::vector<u32> pi = random_permutation(right, rng);
    const std::size_t begin = edges.size();
    for (u64 j = 0; j < left; ++j) {
      const u32 u = u32(j);
      const u32 v = u32(left + pi[j]);
      // Rejecting cross-round duplicates keeps the stream simple; the lost
      // edges only lower degrees below the cap.
      if (!seen.insert((u64(u) << 32) | v).second) continue;
      edges.emplace_back(u, v);
    }
    order_block(edges, begin, spec.order, rng);
  }
  return finish(spec, std::move(edges), spec.n);
}

GenResult gen_unbalanced_stars(const GenSpec& spec, KeyedPrf prf) {
  const u64 left = spec.n / 2;
  const u64 star = std::min(spec.delta, left);  // leaves per center
  const u64 centers_per_block = std::max<u64>(1, left / star);
  const u64 center_pool = spec.n - left;
  WSC_CHECK_MSG(center_pool >= centers_per_block,
                "vertex-id space too small for one block of stars");
  // Centers are never reused (they reach full degree within their block);
  // leaves gain one edge per block, so both sides stay within the cap.
  u64 blocks = std::min(center_pool / centers_per_block, spec.delta);
  if (spec.target_edges) {
    blocks = std::min(blocks,
                      ceil_div(spec.target_edges, centers_per_block * star));
  }
  blocks = std::max<u64>(1, blocks);
  EdgeList edges;
  edges.reserve(blocks * centers_per_block * star);
  std::vector<u32> leaves(left);
  std::iota(leaves.begin(), leaves.end(), u32(0));
  u64 next_center = left;
  for (u64 b = 0; b < blocks; ++b) {
    auto rng = prf.stream({0x73746172ULL, b});
    shuffle_in_place(leaves, rng);
    const std::size_t begin = edges.size();
    for (u64 c = 0; c < centers_per_block; ++c) {
      const u32 center = u32(next_center++);
      for (u64 i = 0; i < star; ++i) {
        edges.emplace_back(leaves[c * star + i], center);
      }
    }
    order_block(edges, begin, spec.order, rng);
  }
  return finish(spec, std::move(edges), centers_per_block * star);
}

GenResult gen_d_regular(const GenSpec& spec, KeyedPrf prf) {
  const u64 d = spec.d ? spec.d : std::min<u64>(8, spec.delta);
  if ((d * spec.n) % 2 != 0) {
    throw input_error("a d-regular block needs d*n even");
  }
  if (spec.n % 2 != 0) {
    throw input_error("d-regular blocks need two equal sides");
  }
  const u64 half = spec.n / 2;
  if (d > spec.delta) {
    throw input_error("per-block degree exceeds the declared cap");
  }
  if (d > half) {
    throw input_error("per-block degree exceeds the side size");
  }
  u64 blocks = std::max<u64>(1, std::min<u64>(spec.delta / d, 4));
  if (spec.target_edges) {
    blocks = std::max<u64>(
        1, std::min(spec.delta / d, ceil_div(spec.target_edges, d * half)));
  }
  EdgeList edges;
  edges.reserve(blocks * d * half);
  for (u64 b = 0; b < blocks; ++b) {
    auto rng = prf.stream({0x726567756c6172ULL, b});
    const std::vector<u32> pi = random_permutation(half, rng);
    const std::size_t begin = edges.size();
    // d cyclic shifts of one random pairing: rounds are pairwise
    // edge-disjoint perfect matchings, so the block is d-regular and simple.
    for (u64 i = 0; i < d; ++i) {
      for (u64 j = 0; j < half; ++j) {
        edges.emplace_back(u32(j), u32(half + (pi[j] + i) % half));
      }
    }
    order_block(edges, begin, spec.order, rng);
  }
  return finish(spec, std::move(edges), d * half);
}

GenResult gen_multigraph(const GenSpec& spec, KeyedPrf prf) {
  WSC_CHECK_MSG(spec.delta >= 2, "parallel edges need a degree cap of two");
  const u64 left = spec.n / 2;
  const u64 right = spec.n - left;
  const u64 target = spec.target_edges ? spec.target_edges : 4 * spec.n;
  // Every third pairing is emitted twice, so one round adds at most two to
  // any degree.
  const u64 rounds = std::max<u64>(
      1, std::min(spec.delta / 2, ceil_div(target, left + left / 3)));
  EdgeList edges;
  for (u64 r = 0; r < rounds; ++r) {
    auto rng = prf.stream({0x6d756c7469ULL, r});
    const std::vector<u32> pi = random_permutation(right, rng);
    const std::size_t begin = edges.size();
    for (u64 j = 0; j < left; ++j) {
      const u32 u = u32(j);
      const u32 v = u32(left + pi[j]);
      edges.emplace_back(u, v);
      if (j % 3 == 0) edges.emplace_back(u, v);
    }
    order_block(edges, begin, spec.order, rng);
  }
  return finish(spec, std::move(edges), spec.n);
}

}  // namespace

bool gen_kind_from_string(const std::string& s, GenKind* out) {
  if (s == "random-bipartite") *out = GenKind::kRandomBipartite;
  else if (s == "unbalanced-stars") *out = GenKind::kUnbalancedStars;
  else if (s == "d-regular-batches") *out = GenKind::kDRegular;
  else if (s == "multigraph") *out = GenKind::kMultigraph;
  else return false;
  return true;
}

bool gen_order_from_string(const std::string& s, GenOrder* out) {
  if (s == "adversarial-sorted") *out = GenOrder::kSorted;
  else if (s == "random") *out = GenOrder::kRandom;
  else return false;
  return true;
}

GenResult generate_stream(const GenSpec& spec) {
  if (spec.n < 4) throw input_error("generator needs at least four vertices");
  if (spec.n > (u64(1) << 32)) {
    throw input_error("vertex ids must fit in 32 bits");
  }
  if (spec.delta == 0) throw input_error("degree cap must be positive");
  KeyedPrf prf(mix64(spec.seed ^ (u64(spec.kind) << 56)));
  switch (spec.kind) {
    case GenKind::kRandomBipartite: return gen_random_bipartite(spec, prf);
    case GenKind::kUnbalancedStars: return gen_unbalanced_stars(spec, prf);
    case GenKind::kDRegular: return gen_d_regular(spec, prf);
    case GenKind::kMultigraph: return gen_multigraph(spec, prf);
  }
  throw contract_error("unknown generator kind");
}

void write_stream(std::ostream& os, const GenResult& gen) {
  WSC_CHECK_MSG(gen.header.m.has_value() || !gen.header.delta.has_value(),
                "a header with delta must also carry m");
  os << gen.header.n;
  if (gen.header.m) os << ' ' << *gen.header.m;
  if (gen.header.delta) os << ' ' << *gen.header.delta;
  os << '\n';
  for (const auto& [u, v] : gen.edges) os << u << ' ' << v << '\n';
}

}  // namespace wsc
