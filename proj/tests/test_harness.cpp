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

// Harness components: the properness checker, the color-budget auditor and
// its closed-form ceilings, the workload generators, and the instrumented
// space audit.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wscolor/budget.hpp"
#include "wscolor/verifier.hpp"

using namespace wsc;
using namespace wsc::test;

namespace {

VerifyReport check(const std::string& graph, const std::string& records,
                   VerifyOptions opt = {}) {
  std::istringstream g(graph);
  std::istringstream r(records);
  return verify_proper(g, r, opt);
}

NamespaceBudgetInput greedy_decl(u64 delta, u32 mdepth = 0) {
  NamespaceBudgetInput in;
  in.ns.scheme = Scheme::kGreedy;
  in.ns.mdepth = mdepth;
  in.delta = delta;
  in.batches = 1;
  in.batch_bound = 1;
  in.epsilon = 0.5L;
  return in;
}

}  // namespace

TEST_CASE("checker accepts a proper record set") {
  const std::string graph = stream_text(4, {{0, 1}, {2, 3}, {0, 2}});
  // Disjoint edges may share a color; incident ones must not.
  const std::string records =
      "0 1:0:0:0:0:0:GR:0\n"
      "1 1:0:0:0:0:0:GR:0\n"
      "2 1:0:0:0:0:0:GR:1\n";
  const VerifyReport rep = check(graph, records);
  CHECK(rep.ok);
  CHECK(rep.n == 4);
  CHECK(rep.edges == 3);
  CHECK(rep.records == 3);
  CHECK(rep.colored == 3);
  CHECK(rep.conflicts == 0);
  CHECK(rep.missing == 0);
  CHECK(rep.errors.empty());
}

TEST_CASE("checker counts a planted conflict once per endpoint clash") {
  const std::string graph = stream_text(4, {{0, 1}, {0, 2}, {1, 2}});
  const std::string records =
      "0 1:0:0:0:0:0:GR:7\n"
      "1 1:0:0:0:0:0:GR:7\n"
      "2 1:0:0:0:0:0:GR:8\n";
  const VerifyReport rep = check(graph, records);
  CHECK(!rep.ok);
  CHECK(rep.conflicts == 1);  // edges 0 and 1 clash at vertex 0
  CHECK(!rep.errors.empty());
}

TEST_CASE("checker flags missing, duplicate, and unknown records") {
  const std::string graph = stream_text(4, {{0, 1}, {2, 3}});

  const VerifyReport missing = check(graph, "0 1:0:0:0:0:0:GR:0\n");
  CHECK(!missing.ok);
  CHECK(missing.missing == 1);

  const VerifyReport dup = check(graph,
                                 "0 1:0:0:0:0:0:GR:0\n"
                                 "1 1:0:0:0:0:0:GR:1\n"
                                 "1 1:0:0:0:0:0:GR:2\n");
  CHECK(!dup.ok);
  CHECK(dup.duplicate_records == 1);

  const VerifyReport unknown = check(graph,
                                     "0 1:0:0:0:0:0:GR:0\n"
                                     "1 1:0:0:0:0:0:GR:1\n"
                                     "5 1:0:0:0:0:0:GR:2\n");
  CHECK(!unknown.ok);
  CHECK(!unknown.errors.empty());
}

TEST_CASE("checker treats unresolved markers per the caller's policy") {
  const std::string graph = stream_text(4, {{0, 1}, {2, 3}});
  const std::string records =
      "0 1:0:0:0:0:0:GR:0\n"
      "1 BOT\n";
  const VerifyReport strict = check(graph, records);
  CHECK(!strict.ok);
  CHECK(strict.bots == 1);

  VerifyOptions opt;
  opt.allow_bot = true;
  const VerifyReport loose = check(graph, records, opt);
  CHECK(loose.ok);
  CHECK(loose.bots == 1);
  CHECK(loose.colored == 1);
}

TEST_CASE("checker reports malformed lines instead of dying") {
  const std::string graph = stream_text(4, {{0, 1}});
  CHECK(!check(graph, "0 1:2:3\n").ok);          // color string too short
  CHECK(!check(graph, "zero 1:0:0:0:0:0:GR:0\n").ok);
  CHECK(!check(graph, "0 1:0:0:0:0:0:XX:0\n").ok);  // unknown scheme tag
  CHECK(!check(graph, "0 1:0:0:0:0:0:GR:0 extra\n").ok);
}

TEST_CASE("checker rejects malformed graphs") {
  CHECK(!check("", "").ok);
  CHECK(!check("4 3\n0 1\n", "0 1:0:0:0:0:0:GR:0\n").ok);  // m mismatch
  CHECK(!check("4\n2 2\n", "0 1:0:0:0:0:0:GR:0\n").ok);    // self-loop
  CHECK(!check("4\n0 9\n", "0 1:0:0:0:0:0:GR:0\n").ok);    // out of range
}

TEST_CASE("budget auditor compares distinct colors against the ceiling") {
  // A first-fit namespace under cap 5 may use at most 9 distinct colors.
  const auto records_with = [](u64 distinct) {
    std::string all;
    for (u64 i = 0; i < distinct; ++i) {
      all += std::to_string(i) + " 1:0:0:0:0:0:GR:" + std::to_string(i) + "\n";
    }
    return all;
  };

  {
    std::istringstream r(records_with(9));
    const BudgetReport rep = verify_budget(r, {greedy_decl(5)});
    CHECK(rep.ok);
    CHECK(rep.colored == 9);
    REQUIRE(rep.tallies.size() == 1);
    CHECK(rep.tallies[0].known);
    CHECK(rep.tallies[0].within);
    CHECK(rep.tallies[0].distinct_colors == 9);
    CHECK(rep.tallies[0].budget == 9);
  }
  {
    std::istringstream r(records_with(10));
    const BudgetReport rep = verify_budget(r, {greedy_decl(5)});
    CHECK(!rep.ok);
    REQUIRE(rep.tallies.size() == 1);
    CHECK(!rep.tallies[0].within);
  }
  {
    // One pair-reduction layer doubles the coordinate space.
    std::string all;
    for (u64 i = 0; i < 10; ++i) {
      all += std::to_string(i) + " 1:1:0:0:0:0:GR:" + std::to_string(i) + "\n";
    }
    std::istringstream r(all);
    const BudgetReport rep = verify_budget(r, {greedy_decl(5, 1)});
    CHECK(rep.ok);
    CHECK(rep.tallies[0].budget == 18);
  }
  {
    std::istringstream r(std::string("0 1:0:0:0:0:0:RH:1:2:3\n"));
    const BudgetReport rep = verify_budget(r, {greedy_decl(5)});
    CHECK(!rep.ok);  // namespace never declared
    REQUIRE(rep.tallies.size() == 1);
    CHECK(!rep.tallies[0].known);
  }
  {
    std::istringstream r(std::string(""));
    const BudgetReport rep = verify_budget(r, {});
    CHECK(rep.ok);
    CHECK(rep.colored == 0);
    CHECK(rep.tallies.empty());
  }
}

TEST_CASE("closed-form ceilings carry the frozen values") {
  CHECK(rand_low_budget(16, 0.5L, 1, 3, 16) == 32000);
  CHECK(rand_high_budget(256, 4, 4) == 3072);
  CHECK(shortcut_budget(1, 2, 3) == 36);
  CHECK(greedy_budget(5) == 9);
}

TEST_CASE("namespace ceilings ignore which side carries which exponent") {
  NamespaceBudgetInput in;
  in.ns.scheme = Scheme::kRandLow;
  in.ns.l = 3;
  in.ns.r = 1;
  in.delta = 16;
  in.batches = 4;
  in.batch_bound = 16;
  in.epsilon = 0.5L;
  NamespaceBudgetInput swapped = in;
  swapped.ns.l = 1;
  swapped.ns.r = 3;
  CHECK(namespace_budget(in) == namespace_budget(swapped));
  CHECK(namespace_budget(swapped) == rand_low_budget(16, 0.5L, 1, 3, 16));

  in.ns.scheme = Scheme::kDetLow;
  swapped.ns.scheme = Scheme::kDetLow;
  in.q = swapped.q = 2;
  in.lambda = swapped.lambda = 1024;
  CHECK(namespace_budget(in) == namespace_budget(swapped));

  in.ns.scheme = Scheme::kShortcut;
  swapped.ns.scheme = Scheme::kShortcut;
  CHECK(namespace_budget(in) == namespace_budget(swapped));
}

TEST_CASE("pair-reduction layers double every ceiling per level") {
  NamespaceBudgetInput in = greedy_decl(5);
  const u128 base = namespace_budget(in);
  in.ns.mdepth = 3;
  CHECK(namespace_budget(in) == 8 * base);
}

TEST_CASE("generators are reproducible and seed-sensitive") {
  GenSpec spec;
  spec.kind = GenKind::kRandomBipartite;
  spec.n = 64;
  spec.delta = 8;
  spec.seed = 9;
  const GenResult a = generate_stream(spec);
  const GenResult b = generate_stream(spec);
  CHECK(a.edges == b.edges);
  spec.seed = 10;
  CHECK(a.edges != generate_stream(spec).edges);
}

TEST_CASE("random bipartite blocks are simple and sided") {
  GenSpec spec;
  spec.kind = GenKind::kRandomBipartite;
  spec.n = 64;
  spec.delta = 8;
  spec.seed = 1;
  spec.target_edges = 200;
  const GenResult g = generate_stream(spec);
  REQUIRE(g.header.m.has_value());
  CHECK(*g.header.m == g.edges.size());
  CHECK(g.header.delta == 8);

  std::set<std::pair<u32, u32>> seen;
  std::map<u32, u64> deg;
  for (const auto& [u, v] : g.edges) {
    CHECK(u < 32);
    CHECK(v >= 32);
    CHECK(v < 64);
    CHECK(seen.insert({u, v}).second);  // simple
    ++deg[u];
    ++deg[v];
  }
  for (const auto& [vertex, d] : deg) CHECK(d <= 8);
}

TEST_CASE("adversarial order sorts every block lexicographically") {
  GenSpec spec;
  spec.kind = GenKind::kDRegular;
  spec.n = 64;
  spec.delta = 16;
  spec.seed = 2;
  spec.d = 4;
  spec.order = GenOrder::kSorted;
  const GenResult g = generate_stream(spec);
  REQUIRE(g.block > 0);
  REQUIRE(g.edges.size() % g.block == 0);
  for (std::size_t b = 0; b < g.edges.size(); b += g.block) {
    for (std::size_t i = b + 1; i < b + g.block; ++i) {
      CHECK(g.edges[i - 1] <= g.edges[i]);
    }
  }
}

TEST_CASE("regular blocks give every touched vertex the same degree") {
  GenSpec spec;
  spec.kind = GenKind::kDRegular;
  spec.n = 64;
  spec.delta = 16;
  spec.seed = 3;
  spec.d = 4;
  const GenResult g = generate_stream(spec);
  CHECK(g.block == 4 * 32);
  REQUIRE(g.edges.size() % g.block == 0);
  for (std::size_t b = 0; b < g.edges.size(); b += g.block) {
    std::map<u32, u64> deg;
    std::set<std::pair<u32, u32>> simple;
    for (std::size_t i = b; i < b + g.block; ++i) {
      ++deg[g.edges[i].first];
      ++deg[g.edges[i].second];
      CHECK(simple.insert(g.edges[i]).second);
    }
    for (const auto& [vertex, d] : deg) CHECK(d == 4);
  }
}

TEST_CASE("infeasible regular specs are input errors") {
  GenSpec spec;
  spec.kind = GenKind::kDRegular;
  spec.delta = 16;
  spec.n = 7;
  spec.d = 3;
  CHECK_THROWS_AS(generate_stream(spec), input_error);  // d*n odd
  spec.d = 2;
  CHECK_THROWS_AS(generate_stream(spec), input_error);  // odd side split
  spec.n = 8;
  spec.d = 20;
  CHECK_THROWS_AS(generate_stream(spec), input_error);  // d above the cap
  spec.d = 5;
  CHECK_THROWS_AS(generate_stream(spec), input_error);  // d above the side
}

TEST_CASE("generator guardrails reject degenerate specs") {
  GenSpec spec;
  spec.n = 2;
  spec.delta = 4;
  CHECK_THROWS_AS(generate_stream(spec), input_error);
  spec.n = 64;
  spec.delta = 0;
  CHECK_THROWS_AS(generate_stream(spec), input_error);
}

TEST_CASE("star blocks drive centers to the full cap") {
  GenSpec spec;
  spec.kind = GenKind::kUnbalancedStars;
  spec.n = 64;
  spec.delta = 8;
  spec.seed = 4;
  const GenResult g = generate_stream(spec);
  CHECK(g.block == 4 * 8);  // four centers of eight leaves per block
  std::map<u32, u64> deg;
  for (const auto& [u, v] : g.edges) {
    CHECK(u < 32);   // leaves
    CHECK(v >= 32);  // centers
    ++deg[u];
    ++deg[v];
  }
  u64 at_cap = 0;
  for (const auto& [vertex, d] : deg) {
    CHECK(d <= 8);
    at_cap += (vertex >= 32 && d == 8);
  }
  CHECK(at_cap > 0);  // centers reach full degree within their block
}

TEST_CASE("multigraph blocks plant parallel copies under the cap") {
  GenSpec spec;
  spec.kind = GenKind::kMultigraph;
  spec.n = 64;
  spec.delta = 8;
  spec.seed = 5;
  spec.target_edges = 300;
  const GenResult g = generate_stream(spec);
  std::map<std::pair<u32, u32>, u64> mult;
  std::map<u32, u64> deg;
  for (const auto& [u, v] : g.edges) {
    ++mult[{u, v}];
    ++deg[u];
    ++deg[v];
  }
  u64 parallel = 0;
  for (const auto& [pair, m] : mult) parallel += m > 1;
  CHECK(parallel > 0);
  for (const auto& [vertex, d] : deg) CHECK(d <= 8);
}

TEST_CASE("kind and order names round-trip") {
  GenKind kind;
  CHECK(gen_kind_from_string("random-bipartite", &kind));
  CHECK(kind == GenKind::kRandomBipartite);
  CHECK(gen_kind_from_string("unbalanced-stars", &kind));
  CHECK(gen_kind_from_string("d-regular-batches", &kind));
  CHECK(gen_kind_from_string("multigraph", &kind));
  CHECK(!gen_kind_from_string("petersen", &kind));
  GenOrder order;
  CHECK(gen_order_from_string("adversarial-sorted", &order));
  CHECK(order == GenOrder::kSorted);
  CHECK(gen_order_from_string("random", &order));
  CHECK(!gen_order_from_string("fifo", &order));
}

TEST_CASE("stream writer emits the full header") {
  GenSpec spec;
  spec.kind = GenKind::kRandomBipartite;
  spec.n = 64;
  spec.delta = 8;
  spec.seed = 1;
  spec.target_edges = 100;
  const GenResult g = generate_stream(spec);
  std::ostringstream os;
  write_stream(os, g);
  std::istringstream is(os.str());
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header ==
        "64 " + std::to_string(g.edges.size()) + " 8");
  u64 lines = 0;
  for (std::string line; std::getline(is, line);) lines += !line.empty();
  CHECK(lines == g.edges.size());
}

TEST_CASE("instrumented runs audit mark space against its ceiling") {
  GenSpec spec;
  spec.kind = GenKind::kUnbalancedStars;
  spec.n = 256;
  spec.delta = 16;
  spec.seed = 3;
  spec.target_edges = 900;
  const std::string stream = gen_text(spec);

  PipelineConfig cfg;
  cfg.seed = 11;
  cfg.memory_budget_c = 2;
  cfg.instrument = true;
  const RunOut run = run_color(stream, cfg);
  CHECK(check_proper(stream, run.records).ok);

  REQUIRE(!run.stats.space.empty());
  CHECK(run.stats.store_count == run.stats.space.size());
  u128 total_bound = 0;
  for (const SpaceReport& rep : run.stats.space) {
    CHECK(rep.bound == u64(pow2(rep.height + 3)) * 256);
    CHECK(rep.high_water <= rep.bound);
    total_bound += rep.bound;
  }
  CHECK(run.stats.space_bound_total == total_bound);
  CHECK(run.stats.mark_live_high_water <= run.stats.space_bound_total);
}
