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

#include "wscolor/stream_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace wsc {

namespace {

// Splits a line into unsigned fields; returns false on any non-numeric token.
bool parse_fields(const std::string& line, std::vector<u64>* out) {
  out->clear();
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos) return false;
    if (tok.size() > 19) return false;
    out->push_back(std::stoull(tok));
  }
  return true;
}

}  // namespace

StreamHeader parse_header(const std::string& line) {
  std::vector<u64> f;
  if (!parse_fields(line, &f) || f.empty() || f.size() > 3)
    throw input_error("parse error at line 1: header must be 'n [m] [delta]', got '" +
                      line + "'");
  StreamHeader h;
  h.n = f[0];
  if (h.n == 0) throw input_error("parse error at line 1: n must be positive");
  if (f.size() >= 2) h.m = f[1];
  if (f.size() >= 3) h.delta = f[2];
  return h;
}

StreamReader::StreamReader(std::istream& in) : in_(in) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header_ = parse_header(line);
    return;
  }
  throw input_error("parse error: empty stream, missing header");
}

std::optional<Edge> StreamReader::next_edge() {
  std::string line;
  while (std::getline(in_, line)) {
    u64 at = line_no_++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<u64> f;
    if (!parse_fields(line, &f) || f.size() != 2)
      throw input_error("parse error at line " + std::to_string(at) +
                        ": expected 'u v', got '" + line + "'");
    if (f[0] >= header_.n || f[1] >= header_.n)
      throw input_error("parse error at line " + std::to_string(at) +
                        ": vertex id out of range [0, " + std::to_string(header_.n) +
                        ")");
    if (f[0] == f[1])
      throw input_error("parse error at line " + std::to_string(at) +
                        ": self-loop " + std::to_string(f[0]));
    return Edge{u32(f[0]), u32(f[1]), next_seq_++};
  }
  return std::nullopt;
}

std::optional<Batch> StreamReader::read_batch(u64 batch_size) {
  WSC_CHECK_MSG(batch_size > 0, "batch size must be positive");
  Batch b;
  b.edges.reserve(batch_size);
  while (b.edges.size() < batch_size) {
    auto e = next_edge();
    if (!e) break;
    b.edges.push_back(*e);
  }
  if (b.edges.empty()) return std::nullopt;
  b.ordinal = next_ordinal_++;
  return b;
}

void TextRecordSink::emit_color(u64 seq, const ColorId& color) {
  if (track_) {
    WSC_CHECK_MSG(seen_.insert(seq).second,
                  "duplicate final color for seq " + std::to_string(seq));
  }
  out_ << seq << ' ' << color.to_string() << '\n';
  ++colors_emitted_;
}

void TextRecordSink::emit_bot(u64 seq) {
  out_ << seq << " BOT\n";
  ++bots_emitted_;
}

ClassifiedBatch classify_batch(const std::vector<Edge>& edges) {
  ClassifiedBatch out;
  for (const Edge& e : edges) {
    ++out.deg_u[e.u];
    ++out.deg_v[e.v];
  }
  for (const Edge& e : edges) {
    ClassKey key{floor_log2(out.deg_u[e.u]), floor_log2(out.deg_v[e.v])};
    out.classes[key].push_back(e);
  }
  return out;
}

}  // namespace wsc
