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

#include <compare>
#include <string>
#include <vector>

#include "wscolor/common.hpp"

namespace wsc {

// Which per-class scheme produced a color. Letter tags appear verbatim in the
// serialized form so namespaces are visible in the output stream.
enum class Scheme : u32 {
  kRandLow = 0,   // RL: forest-of-palettes randomized scheme
  kRandHigh = 1,  // RH: shifted-bucket randomized scheme
  kShortcut = 2,  // SC: per-batch flat palette for small classes
  kDetLow = 3,    // DL: deterministic tuple-color scheme
  kDetHigh = 4,   // DH: deterministic bucket scheme
  kGreedy = 5,    // GR: in-memory first-fit finisher
};

const char* scheme_tag(Scheme s);
bool scheme_from_tag(const std::string& tag, Scheme* out);

// Where in the reduction stack a color was minted. Colors from distinct
// namespaces are disjoint by construction: every field is part of the
// serialized string.
struct ColorNamespace {
  u32 epoch = 1;   // doubling-wrapper epoch (first epoch is 1)
  u32 mdepth = 0;  // multigraph pair-reduction depth
  u32 depth = 0;   // uncolored-residual recursion depth
  u32 level = 0;   // bipartization level
  u32 l = 0;       // left degree-class exponent
  u32 r = 0;       // right degree-class exponent
  Scheme scheme = Scheme::kGreedy;

  auto operator<=>(const ColorNamespace&) const = default;
  std::string to_string() const;
};

// Hierarchical color identifier: namespace + scheme-local coordinates.
// Totally ordered; serialized as colon-separated fields with a letter tag in
// the scheme slot, e.g. "1:0:0:3:2:4:RL:0:1:7:4:202".
struct ColorId {
  ColorNamespace ns;
  std::vector<u64> local;

  auto operator<=>(const ColorId&) const = default;

  std::string to_string() const;
  static ColorId parse(const std::string& s);

  // Pair-reduction transform: the color for a demoted edge keeps every field
  // but its final coordinate, which is doubled; the evicted partner gets the
  // odd sibling. Coordinates are 0-based, so (2k, 2k+1) is the 1-based
  // "2k-1 / 2k" pairing.
  ColorId with_last_doubled(bool evicted_partner) const {
    WSC_CHECK_MSG(!local.empty(), "color has no local coordinates");
    ColorId out = *this;
    out.local.back() = 2 * local.back() + (evicted_partner ? 1 : 0);
    return out;
  }
};

inline const char* scheme_tag(Scheme s) {
  switch (s) {
    case Scheme::kRandLow: return "RL";
    case Scheme::kRandHigh: return "RH";
    case Scheme::kShortcut: return "SC";
    case Scheme::kDetLow: return "DL";
    case Scheme::kDetHigh: return "DH";
    case Scheme::kGreedy: return "GR";
  }
  return "??";
}

inline bool scheme_from_tag(const std::string& tag, Scheme* out) {
  for (Scheme s : {Scheme::kRandLow, Scheme::kRandHigh, Scheme::kShortcut,
                   Scheme::kDetLow, Scheme::kDetHigh, Scheme::kGreedy}) {
    if (tag == scheme_tag(s)) {
      *out = s;
      return true;
    }
  }
  return false;
}

inline std::string ColorNamespace::to_string() const {
  std::string s;
  s.reserve(24);
  s += std::to_string(epoch);
  s += ':';
  s += std::to_string(mdepth);
  s += ':';
  s += std::to_string(depth);
  s += ':';
  s += std::to_string(level);
  s += ':';
  s += std::to_string(l);
  s += ':';
  s += std::to_string(r);
  s += ':';
  s += scheme_tag(scheme);
  return s;
}

inline std::string ColorId::to_string() const {
  std::string s = ns.to_string();
  for (u64 x : local) {
    s += ':';
    s += std::to_string(x);
  }
  return s;
}

inline ColorId ColorId::parse(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(':', start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  WSC_CHECK_MSG(parts.size() >= 7, "color string too short: " + s);
  ColorId c;
  auto num = [&](const std::string& p) -> u64 {
    WSC_CHECK_MSG(!p.empty() && p.find_first_not_of("0123456789") == std::string::npos,
                  "bad color field '" + p + "' in " + s);
    return std::stoull(p);
  };
  c.ns.epoch = u32(num(parts[0]));
  c.ns.mdepth = u32(num(parts[1]));
  c.ns.depth = u32(num(parts[2]));
  c.ns.level = u32(num(parts[3]));
  c.ns.l = u32(num(parts[4]));
  c.ns.r = u32(num(parts[5]));
  WSC_CHECK_MSG(scheme_from_tag(parts[6], &c.ns.scheme), "bad scheme tag in " + s);
  for (std::size_t i = 7; i < parts.size(); ++i) c.local.push_back(num(parts[i]));
  return c;
}

}  // namespace wsc
