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

// Deterministic per-class schemes: counter-tagged polynomials, shared
// parameter selection, the forest-backed low scheme with coordinate
// matchers, its mark validator, the bucketed high scheme, and deterministic
// end-to-end pipeline runs.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wscolor/det_high.hpp"
#include "wscolor/det_low.hpp"
#include "wscolor/det_params.hpp"
#include "wscolor/expander.hpp"
#include "wscolor/field_poly.hpp"

using namespace wsc;
using namespace wsc::test;

namespace {

DetParams forced_params(u64 delta, long double eps, u64 n) {
  const DetParams base = make_det_params(delta, eps, n, std::nullopt);
  return make_det_params(delta, eps, n, DetParams::forced_lambda(n, base.q));
}

std::vector<LowEdge> banded_batch(u64 nu, u64 du, u64 nv, u64 v_base) {
  std::vector<LowEdge> edges;
  const u64 dv = nu * du / nv;
  for (u64 i = 0; i < nu; ++i) {
    for (u64 j = 0; j < du; ++j) {
      LowEdge e;
      e.u = i;
      e.v = v_base + (i + j) % nv;
      e.v_batch_deg = dv;
      edges.push_back(e);
    }
  }
  return edges;
}

// Coordinate value admissible for child rank s at matcher level i: the
// encoded footprint of s's polynomial at evaluation point x in `copy`.
u64 coord_for_rank(const ExpanderParams& p, u64 s, u64 x, u32 copy) {
  const FieldPoly poly = FieldPoly::from_integer(p.q, s, p.a);
  const std::vector<u64> tuple = gamma_point(poly, x, p.b);
  return (u64(copy) - 1) * p.right_size_u64() + tuple_to_index(tuple, p.q);
}

}  // namespace

TEST_CASE("counter-tagged polynomials place digits as frozen") {
  const FieldPoly tag = encode_counter_poly(3, 9, 5, 4, 9);
  CHECK(tag.coeffs() == std::vector<u64>{2, 1, 1, 1});
}

TEST_CASE("counter-tagged polynomials are pairwise distinct") {
  for (const u64 q : {2, 3}) {
    std::set<std::vector<u64>> seen;
    for (u64 cnt = 0; cnt < 5; ++cnt) {
      for (u64 id = 0; id < 7; ++id) {
        CHECK(seen.insert(encode_counter_poly(q, 5, cnt, id, 7).coeffs())
                  .second);
      }
    }
    CHECK(seen.size() == 35);
  }
}

TEST_CASE("shared deterministic parameters") {
  const DetParams base = make_det_params(64, 0.5L, 1000, std::nullopt);
  CHECK(base.q >= 2);
  CHECK(is_prime_u64(base.q));
  CHECK(!base.reduced_lambda);
  CHECK(base.lambda >= 2);

  const DetParams forced =
      make_det_params(64, 0.5L, 1000, DetParams::forced_lambda(1000, base.q));
  CHECK(forced.q == base.q);
  CHECK(forced.reduced_lambda);
  CHECK(forced.lambda == u128(1000) * base.q * base.q);

  // The native guarantee needs a degree cap far beyond desk scale.
  CHECK(!det_path_native(1024, 0.5L, u64(1) << 20));
  CHECK(!det_path_native(16, 0.5L, 4096));

  CHECK(ceil_log_base(2, 1) == 0);
  CHECK(ceil_log_base(2, 2) == 1);
  CHECK(ceil_log_base(2, 3) == 2);
  CHECK(ceil_log_base(3, 27) == 3);
  CHECK(ceil_log_base(3, 28) == 4);
  CHECK(pow_sat(3, 4) == 81);
  CHECK(pow_sat(2, 130) == ~u128(0));
}

TEST_CASE("deterministic low scheme colors a benign workload completely") {
  const DetParams params = forced_params(16, 0.5L, 256);
  DetLowScheme det(16, 0.5L, 1, 3, 16, 256, params);
  DetLowScheme replay(16, 0.5L, 1, 3, 16, 256, params);
  CHECK(u128(det.slot_space()) == pow_sat(det.q(), det.b0() + 2));

  for (u64 t = 0; t < 8; ++t) {
    const std::vector<LowEdge> batch = banded_batch(8, 2, 2, 100 + 2 * t);
    const auto out = det.color_batch(batch, t);
    CHECK(out == replay.color_batch(batch, t));
    REQUIRE(out.size() == batch.size());

    std::map<u64, std::set<std::vector<u64>>> around_u, around_v;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      REQUIRE(out[i].has_value());
      const std::vector<u64>& local = *out[i];
      const u32 f_idx = u32(local[0]);
      const ForestShape& sh = det.forests().shapes()[f_idx];
      const u32 h = sh.height();
      REQUIRE(local.size() == h + 5);
      CHECK(local[1] == sh.node_at(h, t));
      CHECK(local[h + 2] >= 1);  // matched evaluation point, 1-based
      CHECK(local[h + 3] < det.slot_space());
      CHECK(local[h + 4] >= 1);  // arrival rank around u, 1-based
      CHECK(local[h + 4] < pow2(1 + 1));
      const std::vector<u64> palette(local.begin() + 2, local.begin() + 2 + h);
      CHECK(det.palette_use_count(f_idx, t, palette) <= pow2(3 + 1));
      CHECK(around_u[batch[i].u].insert(local).second);
      CHECK(around_v[batch[i].v].insert(local).second);
    }
    CHECK(!det.validate(t, 256).has_value());
  }
  const DetLowScheme::Stats& s = det.stats();
  CHECK(s.edges == 128);
  CHECK(s.colored == 128);
  CHECK(s.bot_dead_end == 0);
  CHECK(s.bot_palette == 0);
  CHECK(s.bot_match == 0);
}

TEST_CASE("palette use count equals the brute-force leaf census") {
  // A tall shape with a non-injective top matcher: fanout 64 children are
  // encoded by degree-6 polynomials but the footprint keeps only 4 Hasse
  // orders, so several ranks can share one coordinate value and the census
  // counts more than one leaf per level choice.
  DetParams p;
  p.q = 2;
  p.lambda = 2;
  p.reduced_lambda = true;
  DetLowScheme det(64, 1.0L / 3.0L, 1, 5, 4096, 4096, p);

  i64 f_idx = -1;
  for (std::size_t i = 0; i < det.forests().shapes().size(); ++i) {
    if (det.forests().shapes()[i].f == FreqVector{64, 4}) f_idx = i64(i);
  }
  REQUIRE(f_idx >= 0);
  const ForestShape& sh = det.forests().shapes()[std::size_t(f_idx)];
  REQUIRE(sh.height() == 2);
  const DetVectorParams& vp = det.vector_params(u32(f_idx));
  REQUIRE(vp.level[1].a > vp.level[1].b + 1);  // non-injective regime

  // Candidate coordinates: admissible values from a spread of ranks plus
  // out-of-range and never-reachable values.
  std::vector<u64> c1s, c2s;
  for (const u64 s : {0, 3, 17, 42, 63}) {
    c1s.push_back(coord_for_rank(vp.level[0], s, s & 1, 1 + u32(s % 3)));
    c2s.push_back(coord_for_rank(vp.level[1], s, 1 - (s & 1), 1));
  }
  c1s.push_back(vp.coord_space[0] - 1);
  c1s.push_back(vp.coord_space[0] + 5);
  c2s.push_back(vp.coord_space[1] - 1);
  c2s.push_back(vp.coord_space[1] + 5);

  // Admissibility per child rank, precomputed once per candidate value.
  const auto rank_table = [&](u32 level, const std::vector<u64>& cs) {
    std::vector<std::vector<bool>> adm;
    for (const u64 c : cs) {
      std::vector<bool> row(sh.fanout(level + 1), false);
      for (u64 s = 0; s < row.size(); ++s) {
        row[s] = det.edge_in_level(u32(f_idx), level, s, c);
      }
      adm.push_back(std::move(row));
    }
    return adm;
  };
  const std::vector<std::vector<bool>> adm1 = rank_table(0, c1s);
  const std::vector<std::vector<bool>> adm2 = rank_table(1, c2s);

  u64 nonzero = 0;
  u64 multi = 0;
  for (const u64 t : {0, 1, 5, 63, 64, 100, 255, 1000, 2047, 2048, 4095}) {
    for (std::size_t i1 = 0; i1 < c1s.size(); ++i1) {
      for (std::size_t i2 = 0; i2 < c2s.size(); ++i2) {
        u64 brute = 0;
        for (u64 prior = 0; prior < t; ++prior) {
          if (adm1[i1][sh.rank_in_parent(0, prior)] &&
              adm2[i2][sh.rank_in_parent(1, prior)]) {
            ++brute;
          }
        }
        const u64 api =
            det.palette_use_count(u32(f_idx), t, {c1s[i1], c2s[i2]});
        CHECK(api == brute);
        nonzero += api > 0;
        multi += api > 1;
      }
    }
  }
  CHECK(nonzero > 0);  // the sample exercised admissible palettes
  CHECK(multi > 0);    // ... including multi-leaf counts
}

TEST_CASE("validator flags planted coordinate violations") {
  const DetParams params = forced_params(16, 0.5L, 256);

  SUBCASE("shared coordinate unreachable from a sibling's rank") {
    DetLowScheme det(16, 0.5L, 1, 3, 16, 256, params);
    const u64 c = coord_for_rank(det.vector_params(0).level[0], 1, 0, 1);
    det.forests().store(0).inject_mark(99, 3, Mark{0, 1, 8, {c}});
    det.forests().store(0).inject_mark(99, 3, Mark{0, 2, 8, {c}});
    const auto vio = det.validate(3, 256);
    REQUIRE(vio.has_value());
    CHECK(vio->rule == 4);
    CHECK(vio->detail.find("not reachable") != std::string::npos);
  }

  SUBCASE("mark missing its coordinate suffix") {
    DetLowScheme det(16, 0.5L, 1, 3, 16, 256, params);
    det.forests().store(0).inject_mark(50, 3, Mark{0, 1, 8, {}});
    const auto vio = det.validate(3, 256);
    REQUIRE(vio.has_value());
    CHECK(vio->rule == 4);
    CHECK(vio->detail.find("coordinate tuple") != std::string::npos);
  }

  SUBCASE("a well-formed planted mark passes") {
    DetLowScheme det(16, 0.5L, 1, 3, 16, 256, params);
    const u64 c = coord_for_rank(det.vector_params(0).level[0], 1, 0, 1);
    det.forests().store(0).inject_mark(77, 3, Mark{0, 1, 8, {c}});
    CHECK(!det.validate(3, 256).has_value());
  }
}

TEST_CASE("deterministic high scheme colors everything within its budget") {
  const DetParams params = forced_params(64, 0.5L, 256);
  DetHighScheme hs(64, 256, 3, 3, params);
  CHECK(hs.bucket_cap() == 4);  // ceil(2^8 / 64)
  CHECK(u128(hs.s_space()) == pow_sat(hs.q(), hs.b1() + 2));
  CHECK(hs.color_budget() ==
        u128(hs.s_space()) * hs.t_space() * hs.bucket_cap());

  std::vector<std::pair<u64, u64>> batch;
  std::vector<u64> l_active, r_active;
  for (u64 i = 0; i < 16; ++i) {
    l_active.push_back(i);
    r_active.push_back(100 + i);
    for (u64 j = 0; j < 8; ++j) batch.emplace_back(i, 100 + (i + j) % 16);
  }

  std::map<std::pair<u64, u64>, std::set<std::vector<u64>>> per_edge;
  for (int rep = 0; rep < 8; ++rep) {
    const auto out = hs.color_batch(batch, l_active, r_active);
    REQUIRE(out.size() == batch.size());
    std::map<u64, std::set<std::vector<u64>>> around_u, around_v;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      REQUIRE(out[i].size() == 3);
      CHECK(out[i][0] < hs.s_space());
      CHECK(out[i][1] < hs.t_space());
      CHECK(out[i][2] < hs.bucket_cap());
      CHECK(around_u[batch[i].first].insert(out[i]).second);
      CHECK(around_v[batch[i].second].insert(out[i]).second);
      per_edge[batch[i]].insert(out[i]);
    }
  }
  CHECK(hs.count_u(0) == 8);
  CHECK(hs.count_v(100) == 8);
  CHECK(hs.stats().edges == 8 * batch.size());
  CHECK(hs.stats().colored == hs.stats().edges);  // never defers
  // Counter tags keep colors of one vertex pair distinct across batches.
  for (const auto& [edge, colors] : per_edge) CHECK(colors.size() == 8);
  // The ninth appearance exceeds a counter's digit room: the band contract
  // says a vertex of per-batch degree 8 under cap 64 appears at most 8 times.
  CHECK_THROWS_AS(hs.color_batch(batch, l_active, r_active), input_error);
}

TEST_CASE("deterministic mode falls back to buffered first-fit at desk scale") {
  GenSpec spec;
  spec.kind = GenKind::kRandomBipartite;
  spec.n = 256;
  spec.delta = 16;
  spec.seed = 5;
  spec.target_edges = 900;
  const std::string stream = gen_text(spec);

  PipelineConfig cfg;
  cfg.mode = Mode::kDet;
  cfg.memory_budget_c = 2;
  const RunOut run = run_color(stream, cfg);
  CHECK(run.records == run_color(stream, cfg).records);
  CHECK(check_proper(stream, run.records).ok);
  CHECK(check_budget(run.records, run.stats.minted).ok);
  for (const auto& [seq, color] : parse_records(run.records)) {
    CHECK(color.ns.scheme == Scheme::kGreedy);
  }
}

TEST_CASE("forced deterministic path runs the expander schemes end to end") {
  // Stars skew level-batch degrees, steering edges into the forest-backed
  // low scheme; a d-regular block balances both sides into high classes.
  bool saw_det_low = false;
  bool saw_det_high = false;
  for (const GenKind kind : {GenKind::kUnbalancedStars, GenKind::kDRegular}) {
    GenSpec spec;
    spec.kind = kind;
    spec.n = 256;
    spec.delta = 16;
    spec.seed = 6;
    spec.d = 8;
    spec.target_edges = 900;
    const std::string stream = gen_text(spec);

    PipelineConfig cfg;
    cfg.mode = Mode::kDet;
    cfg.force_det_path = true;
    cfg.validate_marks = true;
    cfg.memory_budget_c = 2;
    const RunOut run = run_color(stream, cfg);
    CHECK(run.records == run_color(stream, cfg).records);
    CHECK(check_proper(stream, run.records).ok);
    CHECK(check_budget(run.records, run.stats.minted).ok);
    for (const SchemeReport& rep : run.stats.schemes) {
      saw_det_low = saw_det_low || rep.ns.scheme == Scheme::kDetLow;
      saw_det_high = saw_det_high || rep.ns.scheme == Scheme::kDetHigh;
    }
  }
  CHECK(saw_det_low);
  CHECK(saw_det_high);
}
