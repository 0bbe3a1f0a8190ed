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

#include "wscolor/verifier.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace wsc {

namespace {

void note(std::vector<std::string>& errors, std::size_t cap, std::string msg) {
  if (errors.size() < cap) errors.push_back(std::move(msg));
}

// Strict line tokenizer: splits on single spaces, rejects anything that is
// not unsigned decimal. Returns nullopt on malformed fields.
std::optional<std::vector<u64>> parse_numbers(const std::string& line,
                                              std::size_t min_count,
                                              std::size_t max_count) {
  std::istringstream in(line);
  std::vector<u64> out;
  std::string tok;
  while (in >> tok) {
    if (out.size() == max_count) return std::nullopt;
    if (tok.find_first_not_of("0123456789") != std::string::npos ||
        tok.size() > 20) {
      return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (errno != 0 || end != tok.c_str() + tok.size()) return std::nullopt;
    out.push_back(v);
  }
  if (out.size() < min_count) return std::nullopt;
  return out;
}

struct ParsedGraph {
  u64 n = 0;
  std::optional<u64> declared_m;
  std::vector<std::pair<u64, u64>> edges;
};

std::optional<ParsedGraph> parse_graph(std::istream& in,
                                       std::vector<std::string>& errors,
                                       std::size_t cap) {
  ParsedGraph g;
  std::string line;
  if (!std::getline(in, line)) {
    note(errors, cap, "graph stream is empty");
    return std::nullopt;
  }
  const auto header = parse_numbers(line, 1, 3);
  if (!header || (*header)[0] == 0) {
    note(errors, cap, "bad graph header: '" + line + "'");
    return std::nullopt;
  }
  g.n = (*header)[0];
  if (header->size() >= 2) g.declared_m = (*header)[1];
  u64 lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto nums = parse_numbers(line, 2, 2);
    if (!nums) {
      note(errors, cap,
           "bad edge at graph line " + std::to_string(lineno) + ": '" + line +
               "'");
      return std::nullopt;
    }
    const u64 u = (*nums)[0], v = (*nums)[1];
    if (u >= g.n || v >= g.n) {
      note(errors, cap,
           "edge (" + std::to_string(u) + "," + std::to_string(v) +
               ") outside the vertex range");
      return std::nullopt;
    }
    if (u == v) {
      note(errors, cap,
           "self-loop at vertex " + std::to_string(u) + " cannot be colored");
      return std::nullopt;
    }
    g.edges.emplace_back(u, v);
  }
  if (g.declared_m && *g.declared_m != g.edges.size()) {
    note(errors, cap,
         "header declares " + std::to_string(*g.declared_m) + " edges, found " +
             std::to_string(g.edges.size()));
    return std::nullopt;
  }
  return g;
}

struct RecordLine {
  u64 seq = 0;
  bool bot = false;
  std::string color;  // set when !bot
};

// Parses "seq color" / "seq BOT". Returns nullopt on malformed lines.
std::optional<RecordLine> parse_record(const std::string& line) {
  std::istringstream in(line);
  std::string seq_tok, payload, extra;
  if (!(in >> seq_tok >> payload) || (in >> extra)) return std::nullopt;
  if (seq_tok.find_first_not_of("0123456789") != std::string::npos ||
      seq_tok.empty() || seq_tok.size() > 20) {
    return std::nullopt;
  }
  RecordLine r;
  errno = 0;
  char* end = nullptr;
  r.seq = std::strtoull(seq_tok.c_str(), &end, 10);
  if (errno != 0 || end != seq_tok.c_str() + seq_tok.size()) {
    return std::nullopt;
  }
  if (payload == "BOT") {
    r.bot = true;
  } else {
    r.color = std::move(payload);
  }
  return r;
}

}  // namespace

VerifyReport verify_proper(std::istream& graph, std::istream& records,
                           const VerifyOptions& opt) {
  VerifyReport rep;
  const auto g = parse_graph(graph, rep.errors, opt.max_errors);
  if (!g) return rep;
  rep.n = g->n;
  rep.edges = g->edges.size();

  // state: 0 = no record yet, 1 = colored, 2 = unresolved.
  std::vector<std::string> color_of(g->edges.size());
  std::vector<unsigned char> state(g->edges.size(), 0);
  std::string line;
  u64 lineno = 0;
  while (std::getline(records, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto rec = parse_record(line);
    if (!rec) {
      note(rep.errors, opt.max_errors,
           "bad record at line " + std::to_string(lineno) + ": '" + line + "'");
      continue;
    }
    ++rep.records;
    if (rec->seq >= g->edges.size()) {
      note(rep.errors, opt.max_errors,
           "record for unknown edge " + std::to_string(rec->seq));
      continue;
    }
    if (state[rec->seq] != 0) {
      ++rep.duplicate_records;
      note(rep.errors, opt.max_errors,
           "edge " + std::to_string(rec->seq) + " recorded twice");
      continue;
    }
    if (rec->bot) {
      state[rec->seq] = 2;
      ++rep.bots;
      continue;
    }
    try {
      (void)ColorId::parse(rec->color);
    } catch (const contract_error& e) {
      note(rep.errors, opt.max_errors,
           "edge " + std::to_string(rec->seq) + ": " + e.what());
      continue;
    }
    state[rec->seq] = 1;
    color_of[rec->seq] = rec->color;
    ++rep.colored;
  }

  for (u64 i = 0; i < state.size(); ++i) {
    if (state[i] == 0) {
      ++rep.missing;
      note(rep.errors, opt.max_errors,
           "edge " + std::to_string(i) + " has no record");
    }
  }

  // Incidence check: per endpoint, a color may appear on at most one edge.
  std::unordered_map<u64, std::unordered_map<std::string, u64>> palette_at;
  for (u64 i = 0; i < g->edges.size(); ++i) {
    if (state[i] != 1) continue;
    for (const u64 vertex : {g->edges[i].first, g->edges[i].second}) {
      auto [it, fresh] = palette_at[vertex].try_emplace(color_of[i], i);
      if (!fresh) {
        ++rep.conflicts;
        note(rep.errors, opt.max_errors,
             "edges " + std::to_string(it->second) + " and " +
                 std::to_string(i) + " share color " + color_of[i] +
                 " at vertex " + std::to_string(vertex));
      }
    }
  }

  rep.ok = rep.errors.empty() && rep.missing == 0 &&
           rep.duplicate_records == 0 && rep.conflicts == 0 &&
           (opt.allow_bot || rep.bots == 0);
  return rep;
}

BudgetReport verify_budget(std::istream& records,
                           const std::vector<NamespaceBudgetInput>& minted) {
  BudgetReport rep;
  constexpr std::size_t kMaxErrors = 16;
  std::map<ColorNamespace, std::set<std::vector<u64>>> seen;
  std::string line;
  u64 lineno = 0;
  while (std::getline(records, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto rec = parse_record(line);
    if (!rec) {
      note(rep.errors, kMaxErrors,
           "bad record at line " + std::to_string(lineno) + ": '" + line + "'");
      continue;
    }
    if (rec->bot) continue;
    ColorId c;
    try {
      c = ColorId::parse(rec->color);
    } catch (const contract_error& e) {
      note(rep.errors, kMaxErrors,
           "edge " + std::to_string(rec->seq) + ": " + e.what());
      continue;
    }
    ++rep.colored;
    seen[c.ns].insert(c.local);
  }

  std::map<ColorNamespace, NamespaceBudgetInput> declared;
  for (const auto& in : minted) declared.emplace(in.ns, in);

  for (const auto& [ns, colors] : seen) {
    NamespaceTally t;
    t.ns = ns;
    t.distinct_colors = colors.size();
    const auto it = declared.find(ns);
    if (it == declared.end()) {
      note(rep.errors, kMaxErrors,
           "namespace " + ns.to_string() + " was never declared by the run");
    } else {
      t.known = true;
      t.budget = namespace_budget(it->second);
      t.within = u128(t.distinct_colors) <= t.budget;
      if (!t.within) {
        note(rep.errors, kMaxErrors,
             "namespace " + ns.to_string() + " used " +
                 std::to_string(t.distinct_colors) + " colors, ceiling " +
                 u128_to_string(t.budget));
      }
    }
    rep.tallies.push_back(std::move(t));
  }

  rep.ok = rep.errors.empty();
  return rep;
}

}  // namespace wsc
