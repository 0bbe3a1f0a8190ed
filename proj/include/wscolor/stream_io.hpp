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

#include <iosfwd>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wscolor/color_id.hpp"
#include "wscolor/common.hpp"

namespace wsc {

struct Edge {
  u32 u = 0;
  u32 v = 0;
  u64 seq = 0;
};

// Stream header "n [m] [delta]"; m and delta are optional. A missing delta
// engages the doubling wrapper.
struct StreamHeader {
  u64 n = 0;
  std::optional<u64> m;
  std::optional<u64> delta;
};

struct Batch {
  u64 ordinal = 0;
  std::vector<Edge> edges;
};

StreamHeader parse_header(const std::string& line);

// One-pass reader over the text edge stream. Rejects self-loops, vertex ids
// outside [0, n), and malformed lines, naming the offending line number.
class StreamReader {
 public:
  explicit StreamReader(std::istream& in);

  const StreamHeader& header() const { return header_; }

  // Next edge in arrival order, or nullopt at end of stream.
  std::optional<Edge> next_edge();

  // Next batch of at most `batch_size` edges; nullopt once the stream is
  // exhausted. Ordinals count from 0.
  std::optional<Batch> read_batch(u64 batch_size);

 private:
  std::istream& in_;
  StreamHeader header_;
  u64 line_no_ = 1;
  u64 next_seq_ = 0;
  u64 next_ordinal_ = 0;
};

// Output record: a final color or a BOT (uncolored) marker for one edge.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void emit_color(u64 seq, const ColorId& color) = 0;
  virtual void emit_bot(u64 seq) = 0;
};

// Writes "seq color" / "seq BOT" lines. With duplicate tracking on, a second
// final color for the same seq trips a contract check.
class TextRecordSink : public RecordSink {
 public:
  explicit TextRecordSink(std::ostream& out, bool track_duplicates = true)
      : out_(out), track_(track_duplicates) {}

  void emit_color(u64 seq, const ColorId& color) override;
  void emit_bot(u64 seq) override;

  u64 colors_emitted() const { return colors_emitted_; }
  u64 bots_emitted() const { return bots_emitted_; }

 private:
  std::ostream& out_;
  bool track_;
  u64 colors_emitted_ = 0;
  u64 bots_emitted_ = 0;
  std::unordered_set<u64> seen_;
};

struct ClassKey {
  u32 l = 0;
  u32 r = 0;
  auto operator<=>(const ClassKey&) const = default;
};

// Degree-class partition of one batch. Degrees are batch-local; every edge
// lands in exactly one class (l, r) with l = floor(log2 deg_F(u)),
// r = floor(log2 deg_F(v)).
struct ClassifiedBatch {
  std::unordered_map<u32, u32> deg_u;  // batch degree per u-side vertex
  std::unordered_map<u32, u32> deg_v;  // batch degree per v-side vertex
  std::map<ClassKey, std::vector<Edge>> classes;
};

ClassifiedBatch classify_batch(const std::vector<Edge>& edges);

}  // namespace wsc
