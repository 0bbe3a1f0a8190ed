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

#include <sstream>

#include "doctest.h"
#include "wscolor/stream_io.hpp"

using namespace wsc;

namespace {

std::string lines(std::initializer_list<std::string> ls) {
  std::string s;
  for (const auto& l : ls) {
    s += l;
    s += '\n';
  }
  return s;
}

}  // namespace

TEST_CASE("header parses all three arities") {
  auto h1 = parse_header("7");
  CHECK(h1.n == 7);
  CHECK(!h1.m);
  CHECK(!h1.delta);
  auto h2 = parse_header("7 10");
  CHECK(h2.m == 10);
  auto h3 = parse_header("7 10 4");
  CHECK(h3.delta == 4);
  CHECK_THROWS_AS(parse_header("x"), input_error);
  CHECK_THROWS_AS(parse_header("1 2 3 4"), input_error);
  CHECK_THROWS_AS(parse_header("0"), input_error);
}

TEST_CASE("ten edges over n=4 split into batches of 4,4,2") {
  std::string in = "4\n";
  for (int i = 0; i < 10; ++i) in += "0 1\n";
  std::istringstream is(in);
  StreamReader r(is);
  auto b0 = r.read_batch(r.header().n);
  auto b1 = r.read_batch(r.header().n);
  auto b2 = r.read_batch(r.header().n);
  auto b3 = r.read_batch(r.header().n);
  REQUIRE(b0);
  REQUIRE(b1);
  REQUIRE(b2);
  CHECK(!b3);
  CHECK(b0->edges.size() == 4);
  CHECK(b1->edges.size() == 4);
  CHECK(b2->edges.size() == 2);
  CHECK(b0->ordinal == 0);
  CHECK(b1->ordinal == 1);
  CHECK(b2->ordinal == 2);
  CHECK(b2->edges[1].seq == 9);
}

TEST_CASE("edge count divisible by batch size leaves no runt batch") {
  std::istringstream is(lines({"4", "0 1", "1 2", "2 3", "3 0"}));
  StreamReader r(is);
  auto b0 = r.read_batch(4);
  REQUIRE(b0);
  CHECK(b0->edges.size() == 4);
  CHECK(!r.read_batch(4));
}

TEST_CASE("empty stream yields zero batches") {
  std::istringstream is("5\n");
  StreamReader r(is);
  CHECK(!r.read_batch(5));
}

TEST_CASE("reader rejects malformed records with a line number") {
  std::istringstream loop(lines({"4", "0 1", "2 2"}));
  StreamReader r1(loop);
  CHECK(r1.next_edge());
  CHECK_THROWS_WITH_AS(r1.next_edge(), doctest::Contains("line 3"), input_error);

  std::istringstream range(lines({"4", "0 9"}));
  StreamReader r2(range);
  CHECK_THROWS_WITH_AS(r2.next_edge(), doctest::Contains("out of range"), input_error);

  std::istringstream garbled(lines({"4", "0 1 2"}));
  StreamReader r3(garbled);
  CHECK_THROWS_AS(r3.next_edge(), input_error);
}

TEST_CASE("classification puts a (deg 5, deg 17) edge in class (2,4)") {
  std::vector<Edge> batch;
  u64 seq = 0;
  // u=0 has batch degree 5; v=100 has batch degree 17; edge (0,100) is shared.
  for (u32 v = 100; v < 105; ++v) batch.push_back({0, v, seq++});
  for (u32 u = 1; u < 17; ++u) batch.push_back({u, 100, seq++});
  auto cls = classify_batch(batch);
  CHECK(cls.deg_u.at(0) == 5);
  CHECK(cls.deg_v.at(100) == 17);
  const auto& c24 = cls.classes.at(ClassKey{2, 4});
  REQUIRE(c24.size() == 1);
  CHECK(c24[0].u == 0);
  CHECK(c24[0].v == 100);
}

TEST_CASE("classification partitions the batch") {
  std::vector<Edge> batch;
  u64 seq = 0;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    u32 u = u32(rng() % 40);
    u32 v = u32(40 + rng() % 40);
    batch.push_back({u, v, seq++});
  }
  auto cls = classify_batch(batch);
  u64 total = 0;
  for (const auto& [key, edges] : cls.classes) {
    for (const Edge& e : edges) {
      CHECK(floor_log2(cls.deg_u.at(e.u)) == key.l);
      CHECK(floor_log2(cls.deg_v.at(e.v)) == key.r);
    }
    total += edges.size();
  }
  CHECK(total == batch.size());
}

TEST_CASE("a lone star batch classifies as (0, floor log2 deg)") {
  std::vector<Edge> batch;
  for (u32 i = 0; i < 9; ++i) batch.push_back({i, 99, i});
  auto cls = classify_batch(batch);
  REQUIRE(cls.classes.size() == 1);
  CHECK(cls.classes.begin()->first == ClassKey{0, 3});
}

TEST_CASE("record sink emits colors and BOT markers") {
  std::ostringstream os;
  TextRecordSink sink(os);
  ColorId c;
  c.ns = {1, 0, 0, 3, 2, 4, Scheme::kRandLow};
  c.local = {0, 1, 7, 202};
  sink.emit_color(17, c);
  sink.emit_bot(3);
  CHECK(os.str() == "17 1:0:0:3:2:4:RL:0:1:7:202\n3 BOT\n");
  CHECK(sink.colors_emitted() == 1);
  CHECK(sink.bots_emitted() == 1);
  CHECK_THROWS_AS(sink.emit_color(17, c), contract_error);
}

TEST_CASE("color ids order, serialize, and round-trip") {
  ColorId a;
  a.ns = {1, 0, 0, 0, 2, 4, Scheme::kRandHigh};
  a.local = {3, 1, 5};
  ColorId b = a;
  b.local.back() = 6;
  CHECK(a < b);
  CHECK(ColorId::parse(a.to_string()) == a);
  ColorId g;
  g.ns = {2, 1, 3, 0, 0, 0, Scheme::kGreedy};
  g.local = {12};
  CHECK(g.to_string() == "2:1:3:0:0:0:GR:12");
  CHECK(ColorId::parse(g.to_string()) == g);
}

TEST_CASE("pair transform doubles the final coordinate") {
  // 0-based coordinates: child color k=2 (the 1-based 3) maps to (4,5),
  // which is the 1-based (5,6) demanded by the 2k-1/2k pairing.
  ColorId c;
  c.ns = {1, 0, 0, 0, 1, 1, Scheme::kShortcut};
  c.local = {0, 2};
  CHECK(c.with_last_doubled(false).local == std::vector<u64>{0, 4});
  CHECK(c.with_last_doubled(true).local == std::vector<u64>{0, 5});
}
