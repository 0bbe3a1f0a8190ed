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

#include "wscolor/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wscolor/det_high.hpp"
#include "wscolor/det_low.hpp"
#include "wscolor/det_params.hpp"
#include "wscolor/prng.hpp"
#include "wscolor/rand_high.hpp"
#include "wscolor/rand_low.hpp"

namespace wsc {

u32 bipartite_level(u64 u, u64 v) {
  WSC_CHECK_MSG(u != v, "self-loops have no bipartization level");
  return u32(std::bit_width(u ^ v)) - 1;
}

namespace {

// Expected residual shrink per pass; also sets the recursion depth cap.
long double shrink_delta(long double epsilon) {
  return (2.0L / 3.0L) * std::pow(0.8L, 1.0L / epsilon);
}

u64 depth_cap(const PipelineConfig& cfg, u64 delta_pow2) {
  if (cfg.max_depth) return cfg.max_depth;
  const long double k = std::max<long double>(1.0L, floor_log2(delta_pow2));
  return u64(std::ceil(50.0L * k / shrink_delta(cfg.epsilon))) + 1;
}

// Uncolored-residual holding area: an in-memory queue that spills to a
// scratch file once it outgrows the configured threshold, later replayed in
// arrival order.
class EdgeSpool {
 public:
  EdgeSpool(std::string dir, u64 mem_limit)
      : dir_(std::move(dir)), limit_(mem_limit) {}
  EdgeSpool(const EdgeSpool&) = delete;
  EdgeSpool& operator=(const EdgeSpool&) = delete;
  ~EdgeSpool() {
    if (!path_.empty()) {
      out_.close();
      std::remove(path_.c_str());
    }
  }

  void add(const Edge& e) {
    if (dir_.empty() || count_ < limit_) {
      mem_.push_back(e);
    } else {
      if (path_.empty()) {
        static u64 sequence = 0;
        path_ = dir_ + "/wscolor-spool-" + std::to_string(++sequence) + ".tmp";
        out_.open(path_, std::ios::trunc);
        WSC_CHECK_MSG(out_.good(), "cannot open scratch file " + path_);
      }
      out_ << e.u << ' ' << e.v << ' ' << e.seq << '\n';
    }
    ++count_;
  }

  u64 size() const { return count_; }

  template <typename Fn>
  void drain(Fn fn) {
    for (const Edge& e : mem_) fn(e);
    if (!path_.empty()) {
      out_.flush();
      std::ifstream in(path_);
      WSC_CHECK_MSG(in.good(), "cannot replay scratch file " + path_);
      Edge e;
      while (in >> e.u >> e.v >> e.seq) fn(e);
    }
  }

 private:
  std::string dir_;
  u64 limit_ = 0;
  u64 count_ = 0;
  std::vector<Edge> mem_;
  std::string path_;
  std::ofstream out_;
};

// Counts what actually reaches the output stream, whatever sink the caller
// supplied.
class CountingSink : public RecordSink {
 public:
  explicit CountingSink(RecordSink* up) : up_(up) {}
  void emit_color(u64 seq, const ColorId& c) override {
    ++colors;
    up_->emit_color(seq, c);
  }
  void emit_bot(u64 seq) override {
    ++bots;
    up_->emit_bot(seq);
  }
  u64 colors = 0;
  u64 bots = 0;

 private:
  RecordSink* up_;
};

struct Ctx {
  const PipelineConfig* cfg = nullptr;
  u64 n = 0;
  u64 batch = 0;
  PipelineStats* stats = nullptr;
  KeyedPrf root{0};
  // Live mark stores, for the instrumented space census.
  std::vector<const ClassForests*> live_forests;
  std::unordered_map<std::string, std::size_t> space_index;

  void register_store_bounds(const ColorNamespace& ns, const ClassForests& f) {
    for (u32 i = 0; i < f.shapes().size(); ++i) {
      const u32 h = f.shapes()[i].height();
      ++stats->store_count;
      stats->space_bound_total += sat_mul(u128(pow2(h + 3)), u128(n));
      if (cfg->instrument) {
        SpaceReport rep;
        rep.ns = ns;
        rep.f_idx = i;
        rep.height = h;
        rep.bound = pow2(h + 3) * n;
        space_index.emplace(ns.to_string() + "#" + std::to_string(i),
                            stats->space.size());
        stats->space.push_back(rep);
      }
    }
  }

  void poll_space(const ColorNamespace& ns, const ClassForests& f) {
    u64 live_total = 0;
    for (const ClassForests* reg : live_forests) {
      for (u32 i = 0; i < reg->shapes().size(); ++i) {
        live_total += reg->store(i).total_marks();
      }
    }
    stats->mark_live_high_water =
        std::max(stats->mark_live_high_water, live_total);
    if (!cfg->instrument) return;
    for (u32 i = 0; i < f.shapes().size(); ++i) {
      auto it = space_index.find(ns.to_string() + "#" + std::to_string(i));
      if (it == space_index.end()) continue;
      SpaceReport& rep = stats->space[it->second];
      rep.high_water = std::max(rep.high_water, f.store(i).total_marks());
    }
  }
};

// In-memory first-fit finisher over a dedicated namespace: at most
// 2*maxdeg - 1 color indices, by the pigeonhole over the two endpoint
// neighborhoods.
void greedy_finish(Ctx& ctx, ColorNamespace ns, EdgeSpool& spool,
                   RecordSink& sink) {
  if (spool.size() == 0) return;
  ns.level = 0;
  ns.l = 0;
  ns.r = 0;
  ns.scheme = Scheme::kGreedy;
  std::vector<Edge> edges;
  edges.reserve(spool.size());
  spool.drain([&](const Edge& e) { edges.push_back(e); });

  std::unordered_map<u64, u64> deg;
  u64 dmax = 0;
  for (const Edge& e : edges) {
    dmax = std::max(dmax, ++deg[e.u]);
    dmax = std::max(dmax, ++deg[e.v]);
  }
  std::unordered_map<u64, std::unordered_set<u64>> used;
  for (const Edge& e : edges) {
    std::unordered_set<u64>& au = used[e.u];
    std::unordered_set<u64>& av = used[e.v];
    u64 c = 0;
    while (au.count(c) || av.count(c)) ++c;
    WSC_CHECK_MSG(c + 1 < 2 * dmax, "first-fit exceeded the greedy bound");
    au.insert(c);
    av.insert(c);
    sink.emit_color(e.seq, ColorId{ns, {c}});
  }
  ctx.stats->greedy_edges += edges.size();
  NamespaceBudgetInput in;
  in.ns = ns;
  in.delta = dmax;
  in.batches = 1;
  in.batch_bound = 1;
  in.epsilon = ctx.cfg->epsilon;
  ctx.stats->minted.push_back(in);
  SchemeReport rep;
  rep.ns = ns;
  rep.edges = edges.size();
  rep.colored = edges.size();
  rep.batches = 1;
  ctx.stats->schemes.push_back(rep);
}

// One degree class (level, l, r) of one colorer: the scheme instance, the
// role normalization for low classes, and the per-instance tallies.
class ClassInstance {
 public:
  ClassInstance(Ctx& ctx, ColorNamespace ns, u64 delta,
                const std::optional<DetParams>& det)
      : ns_(ns), delta_(delta) {
    const u32 k = floor_log2(delta);
    low_class_ = 3 * std::min(ns.l, ns.r) <= k;
    if (low_class_) {
      swapped_ = ns.l > ns.r;
      const u32 sl = std::min(ns.l, ns.r);
      const u32 sr = std::max(ns.l, ns.r);
      // The flat-palette path is deterministic, so det mode shares it for
      // classes whose right band sits at or below the vector floor.
      auto probe = std::make_unique<LowScheme>(
          delta, ctx.cfg->epsilon, sl, sr, delta,
          det ? KeyedPrf(0) : scheme_prf(ctx));
      if (det && !probe->uses_shortcut()) {
        det_low_ = std::make_unique<DetLowScheme>(delta, ctx.cfg->epsilon, sl,
                                                  sr, delta, ctx.n, *det);
      } else {
        low_ = std::move(probe);
      }
    } else if (det) {
      det_high_ =
          std::make_unique<DetHighScheme>(delta, ctx.n, ns.l, ns.r, *det);
    } else {
      high_ = std::make_unique<HighScheme>(delta, ns.l, ns.r, scheme_prf(ctx));
    }
    ns_.scheme = low_ ? low_->scheme()
                      : (det_low_ ? Scheme::kDetLow
                                  : (det_high_ ? Scheme::kDetHigh
                                               : Scheme::kRandHigh));
    if (const ClassForests* f = forests()) {
      ctx.register_store_bounds(ns_, *f);
      ctx.live_forests.push_back(f);
    }
  }

  const ColorNamespace& ns() const { return ns_; }
  bool is_high() const { return high_ != nullptr || det_high_ != nullptr; }

  const ClassForests* forests() const {
    if (low_ && !low_->uses_shortcut()) return &low_->forests();
    if (det_low_) return &det_low_->forests();
    return nullptr;
  }

  // `deg_u`/`deg_v` are the full level-batch degree tables; the pair of
  // active lists drives the high-scheme appearance counters even on batches
  // where this class pairing itself is empty.
  std::vector<std::optional<std::vector<u64>>> color(
      Ctx& ctx, const std::vector<Edge>& edges,
      const std::unordered_map<u32, u32>& deg_u,
      const std::unordered_map<u32, u32>& deg_v, u64 t) {
    ++batches_;
    std::vector<std::optional<std::vector<u64>>> out;
    if (low_ || det_low_) {
      std::vector<LowEdge> les;
      les.reserve(edges.size());
      for (const Edge& e : edges) {
        LowEdge le;
        if (!swapped_) {
          le.u = e.u;
          le.v = e.v;
          le.v_batch_deg = deg_v.at(e.v);
        } else {
          le.u = e.v;
          le.v = e.u;
          le.v_batch_deg = deg_u.at(e.u);
        }
        les.push_back(le);
      }
      out = low_ ? low_->color_batch(les, t) : det_low_->color_batch(les, t);
      if (ctx.cfg->validate_marks) {
        if (det_low_) {
          if (auto vio = det_low_->validate(t, ctx.n)) {
            throw contract_error("mark invariant violated: " + vio->detail);
          }
        } else if (low_ && !low_->uses_shortcut()) {
          if (auto vio = low_->forests().validate(t, ctx.n)) {
            throw contract_error("mark invariant violated: " + vio->detail);
          }
        }
      }
      if (const ClassForests* f = forests()) ctx.poll_space(ns_, *f);
    } else {
      std::vector<std::pair<u64, u64>> pes;
      pes.reserve(edges.size());
      for (const Edge& e : edges) pes.emplace_back(e.u, e.v);
      const std::vector<u64> la = band_vertices(deg_u, ns_.l);
      const std::vector<u64> ra = band_vertices(deg_v, ns_.r);
      if (high_) {
        out = high_->color_batch(pes, la, ra);
      } else {
        for (std::vector<u64>& local : det_high_->color_batch(pes, la, ra)) {
          out.emplace_back(std::move(local));
        }
      }
    }
    return out;
  }

  void finalize(Ctx& ctx, const std::optional<DetParams>& det) {
    SchemeReport rep;
    rep.ns = ns_;
    rep.batches = batches_;
    if (low_) {
      const LowScheme::Stats& s = low_->stats();
      rep.edges = s.edges;
      rep.colored = s.colored;
      rep.bots = s.bot_dead_end + s.bot_palette + s.bot_dedup;
    } else if (det_low_) {
      const DetLowScheme::Stats& s = det_low_->stats();
      rep.edges = s.edges;
      rep.colored = s.colored;
      rep.bots = s.bot_dead_end + s.bot_palette + s.bot_match;
    } else if (high_) {
      const HighScheme::Stats& s = high_->stats();
      rep.edges = s.edges;
      rep.colored = s.colored;
      rep.bots = s.bot_pruned;
    } else {
      const DetHighScheme::Stats& s = det_high_->stats();
      rep.edges = s.edges;
      rep.colored = s.colored;
    }
    ctx.stats->schemes.push_back(rep);

    NamespaceBudgetInput in;
    in.ns = ns_;
    in.delta = delta_;
    in.batches = batches_;
    in.batch_bound = delta_;
    in.epsilon = ctx.cfg->epsilon;
    if (det) {
      in.q = det->q;
      in.lambda = det->lambda;
    }
    ctx.stats->minted.push_back(in);
    if (const ClassForests* f = forests()) {
      auto& reg = ctx.live_forests;
      reg.erase(std::remove(reg.begin(), reg.end(), f), reg.end());
    }
  }

 private:
  KeyedPrf scheme_prf(Ctx& ctx) const {
    return KeyedPrf(ctx.root.hash(
        {ns_.epoch, ns_.mdepth, ns_.depth, ns_.level, ns_.l, ns_.r}));
  }

  static std::vector<u64> band_vertices(
      const std::unordered_map<u32, u32>& deg, u32 exp) {
    std::vector<u64> out;
    for (const auto& [vertex, d] : deg) {
      if (floor_log2(d) == exp) out.push_back(vertex);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  ColorNamespace ns_;
  u64 delta_ = 0;
  bool low_class_ = false;
  bool swapped_ = false;
  std::unique_ptr<LowScheme> low_;
  std::unique_ptr<HighScheme> high_;
  std::unique_ptr<DetLowScheme> det_low_;
  std::unique_ptr<DetHighScheme> det_high_;
  u64 batches_ = 0;
};

// One W-streaming pass at a fixed (epoch, reduction layer, recursion depth):
// routes edges to bipartization levels, cuts per-level batches, dispatches
// classes, and spools the uncolored edges for the next depth.
class SimpleColorer {
 public:
  SimpleColorer(Ctx& ctx, ColorNamespace base, u64 delta,
                const std::optional<DetParams>& det, RecordSink& sink)
      : ctx_(ctx),
        base_(base),
        delta_(delta),
        det_(det),
        sink_(sink),
        spool_(ctx.cfg->scratch_dir, ctx.cfg->spool_memory_edges) {}

  void feed(const Edge& e) {
    const u32 lvl = bipartite_level(e.u, e.v);
    LevelState& st = levels_[lvl];
    Edge oriented = e;
    if (oriented.u > oriented.v) std::swap(oriented.u, oriented.v);
    st.pending.push_back(oriented);
    if (st.pending.size() == ctx_.batch) flush(lvl, st);
  }

  // Flushes the partial level batches, closes every class instance, and
  // hands back the residual spool.
  EdgeSpool& finish() {
    for (auto& [lvl, st] : levels_) {
      if (!st.pending.empty()) flush(lvl, st);
    }
    for (auto& [lvl, st] : levels_) {
      for (auto& [key, inst] : st.classes) inst.finalize(ctx_, det_);
    }
    return spool_;
  }

 private:
  struct LevelState {
    u64 clock = 0;
    std::vector<Edge> pending;
    std::map<std::pair<u32, u32>, ClassInstance> classes;
  };

  void flush(u32 lvl, LevelState& st) {
    const ClassifiedBatch cb = classify_batch(st.pending);
    const u64 t = st.clock++;

    // Classes to touch this batch: every pairing with edges, plus every
    // existing high instance (their appearance counters track band activity
    // even on batches without edges in the pairing).
    std::vector<std::pair<u32, u32>> keys;
    for (const auto& [key, unused] : cb.classes) {
      keys.emplace_back(key.l, key.r);
    }
    for (const auto& [key, inst] : st.classes) {
      if (inst.is_high() && !cb.classes.count(ClassKey{key.first, key.second})) {
        keys.push_back(key);
      }
    }
    std::sort(keys.begin(), keys.end());

    static const std::vector<Edge> kNoEdges;
    for (const auto& key : keys) {
      auto cit = cb.classes.find(ClassKey{key.first, key.second});
      const std::vector<Edge>& edges =
          cit == cb.classes.end() ? kNoEdges : cit->second;
      if (!edges.empty()) {
        WSC_CHECK_MSG(pow2(key.first) <= delta_ && pow2(key.second) <= delta_,
                      "batch degree above the epoch cap");
      }
      auto it = st.classes.find(key);
      if (it == st.classes.end()) {
        if (edges.empty()) continue;
        ColorNamespace ns = base_;
        ns.level = lvl;
        ns.l = key.first;
        ns.r = key.second;
        it = st.classes
                 .emplace(std::piecewise_construct, std::forward_as_tuple(key),
                          std::forward_as_tuple(ctx_, ns, delta_, det_))
                 .first;
      }
      const auto locals = it->second.color(ctx_, edges, cb.deg_u, cb.deg_v, t);
      WSC_CHECK(locals.size() == edges.size());
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (locals[i]) {
          sink_.emit_color(edges[i].seq, ColorId{it->second.ns(), *locals[i]});
        } else {
          spool_.add(edges[i]);
        }
      }
    }
    st.pending.clear();
  }

  Ctx& ctx_;
  ColorNamespace base_;
  u64 delta_ = 0;
  std::optional<DetParams> det_;
  RecordSink& sink_;
  EdgeSpool spool_;
  std::map<u32, LevelState> levels_;
};

// Epoch-level entry point: one of these per (epoch, reduction layer).
class Driver {
 public:
  virtual ~Driver() = default;
  virtual void feed(const Edge& e) = 0;
  virtual void finish() = 0;
};

// The ⊥-recursion chain for one (epoch, layer): run a pass, respool, repeat
// until the residual fits the in-memory budget, then first-fit it.
class DepthDriver : public Driver {
 public:
  DepthDriver(Ctx& ctx, ColorNamespace base, u64 delta,
              const std::optional<DetParams>& det, RecordSink& sink)
      : ctx_(ctx), base_(base), delta_(delta), det_(det), sink_(sink) {
    colorer_ =
        std::make_unique<SimpleColorer>(ctx_, base_, delta_, det_, sink_);
  }

  void feed(const Edge& e) override { colorer_->feed(e); }

  void finish() override {
    const u64 cap = depth_cap(*ctx_.cfg, delta_);
    u32 depth = base_.depth;
    while (true) {
      EdgeSpool& residual = colorer_->finish();
      ++depth;
      ColorNamespace next = base_;
      next.depth = depth;
      if (residual.size() <= ctx_.cfg->memory_budget_c * ctx_.n) {
        greedy_finish(ctx_, next, residual, sink_);
        break;
      }
      WSC_CHECK_MSG(depth <= cap,
                    "recursion depth exceeded the statistical cap");
      ctx_.stats->max_depth = std::max(ctx_.stats->max_depth, depth);
      auto deeper =
          std::make_unique<SimpleColorer>(ctx_, next, delta_, det_, sink_);
      residual.drain([&](const Edge& e) { deeper->feed(e); });
      colorer_ = std::move(deeper);
    }
  }

 private:
  Ctx& ctx_;
  ColorNamespace base_;
  u64 delta_ = 0;
  std::optional<DetParams> det_;
  RecordSink& sink_;
  std::unique_ptr<SimpleColorer> colorer_;
};

// Desk-scale deterministic fallback: the expander parameters only take hold
// at astronomically large degree caps, so the whole epoch is buffered and
// first-fit colored in memory.
class GreedyBufferDriver : public Driver {
 public:
  GreedyBufferDriver(Ctx& ctx, ColorNamespace base, RecordSink& sink)
      : ctx_(ctx),
        base_(base),
        sink_(sink),
        spool_(ctx.cfg->scratch_dir, ctx.cfg->spool_memory_edges) {}

  void feed(const Edge& e) override { spool_.add(e); }
  void finish() override { greedy_finish(ctx_, base_, spool_, sink_); }

 private:
  Ctx& ctx_;
  ColorNamespace base_;
  RecordSink& sink_;
  EdgeSpool spool_;
};

// Parallel-edge reduction: each layer holds a simple subgraph F; an arrival
// parallel to a held edge evicts it, pairs the two, and sends the arrival a
// layer down (multiplicity halves per layer). A child color k fans out to
// the pair as the doubled coordinates 2k and 2k+1.
class PairReducerSink : public RecordSink {
 public:
  explicit PairReducerSink(RecordSink* up) : up_(up) {}

  void watch(u64 inflight_seq, u64 partner_seq) {
    WSC_CHECK_MSG(watch_.emplace(inflight_seq, partner_seq).second,
                  "an edge was paired twice at one layer");
  }

  void emit_color(u64 seq, const ColorId& c) override {
    const auto it = watch_.find(seq);
    WSC_CHECK_MSG(it != watch_.end(),
                  "pair layer got a record for an unwatched edge");
    up_->emit_color(seq, c.with_last_doubled(false));
    up_->emit_color(it->second, c.with_last_doubled(true));
    watch_.erase(it);
  }

  void emit_bot(u64) override {
    throw contract_error("pair reduction cannot forward an uncolored record");
  }

  bool drained() const { return watch_.empty(); }

 private:
  RecordSink* up_;
  std::unordered_map<u64, u64> watch_;
};

class MultiDriver : public Driver {
 public:
  MultiDriver(Ctx& ctx, ColorNamespace base, u64 delta,
              const std::optional<DetParams>&, RecordSink& sink)
      : ctx_(ctx), base_(base), delta_(delta), sink_(sink) {}

  void feed(const Edge& e) override { accept(0, e); }

  void finish() override {
    // A layer's watches resolve only once the deeper layers have colored the
    // demoted partners, so the drain check waits for the whole stack.
    for (std::size_t d = 0; d < layers_.size(); ++d) {
      flush(d);
      layers_[d]->driver->finish();
    }
    for (const auto& L : layers_) {
      WSC_CHECK_MSG(L->reducer->drained(),
                    "a paired edge never received its color");
    }
  }

 private:
  struct Layer {
    std::vector<Edge> held;
    std::vector<char> live;
    std::unordered_map<u64, std::size_t> by_pair;
    u64 live_count = 0;
    std::unique_ptr<PairReducerSink> reducer;  // sink for the layer below
    std::unique_ptr<DepthDriver> driver;
  };

  static u64 pair_key(u64 u, u64 v) {
    return (std::min(u, v) << 32) | std::max(u, v);
  }

  Layer& layer(std::size_t d) {
    while (layers_.size() <= d) {
      const std::size_t j = layers_.size();
      auto L = std::make_unique<Layer>();
      RecordSink* out = j == 0 ? &sink_ : layers_[j - 1]->reducer.get();
      L->reducer = std::make_unique<PairReducerSink>(out);
      ColorNamespace ns = base_;
      ns.mdepth = u32(j);
      const u64 layer_delta = std::max<u64>(1, delta_ >> j);
      std::optional<DetParams> det;
      if (ctx_.cfg->mode == Mode::kDet) det = layer_params(layer_delta);
      L->driver = std::make_unique<DepthDriver>(ctx_, ns, layer_delta, det,
                                                *out);
      layers_.push_back(std::move(L));
      ctx_.stats->layers = std::max<u32>(ctx_.stats->layers, u32(j) + 1);
    }
    return *layers_[d];
  }

  std::optional<DetParams> layer_params(u64 layer_delta) const {
    DetParams p = make_det_params(layer_delta, ctx_.cfg->epsilon, ctx_.n,
                                  std::nullopt);
    if (ctx_.cfg->force_det_path) {
      p = make_det_params(layer_delta, ctx_.cfg->epsilon, ctx_.n,
                          DetParams::forced_lambda(ctx_.n, p.q));
    }
    return p;
  }

  void accept(std::size_t d, const Edge& e) {
    Layer& L = layer(d);
    const u64 key = pair_key(e.u, e.v);
    const auto it = L.by_pair.find(key);
    if (it == L.by_pair.end()) {
      L.by_pair.emplace(key, L.held.size());
      L.held.push_back(e);
      L.live.push_back(1);
      ++L.live_count;
      if (L.live_count == ctx_.batch) flush(d);
      return;
    }
    const std::size_t idx = it->second;
    const Edge partner = L.held[idx];
    L.live[idx] = 0;
    --L.live_count;
    L.by_pair.erase(it);
    L.reducer->watch(e.seq, partner.seq);
    accept(d + 1, e);
  }

  void flush(std::size_t d) {
    Layer& L = *layers_[d];
    for (std::size_t i = 0; i < L.held.size(); ++i) {
      if (L.live[i]) L.driver->feed(L.held[i]);
    }
    L.held.clear();
    L.live.clear();
    L.by_pair.clear();
    L.live_count = 0;
  }

  Ctx& ctx_;
  ColorNamespace base_;
  u64 delta_ = 0;
  RecordSink& sink_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

std::unique_ptr<Driver> make_epoch_driver(Ctx& ctx, u64 delta,
                                          RecordSink& sink) {
  ColorNamespace base;
  base.epoch = std::max<u32>(1, floor_log2(delta));
  std::optional<DetParams> det;
  if (ctx.cfg->mode == Mode::kDet) {
    if (!ctx.cfg->force_det_path &&
        !det_path_native(delta, ctx.cfg->epsilon, ctx.n)) {
      return std::make_unique<GreedyBufferDriver>(ctx, base, sink);
    }
    DetParams p = make_det_params(delta, ctx.cfg->epsilon, ctx.n, std::nullopt);
    if (ctx.cfg->force_det_path) {
      p = make_det_params(delta, ctx.cfg->epsilon, ctx.n,
                          DetParams::forced_lambda(ctx.n, p.q));
    }
    det = p;
  }
  if (ctx.cfg->multigraph) {
    return std::make_unique<MultiDriver>(ctx, base, delta, det, sink);
  }
  return std::make_unique<DepthDriver>(ctx, base, delta, det, sink);
}

}  // namespace

PipelineStats run_pipeline(std::istream& input, RecordSink& user_sink,
                           const PipelineConfig& cfg) {
  WSC_CHECK_MSG(cfg.epsilon > 0 && cfg.epsilon <= 1,
                "epsilon must lie in (0, 1]");
  WSC_CHECK_MSG(cfg.memory_budget_c >= 1, "memory budget must be positive");
  StreamReader reader(input);
  const StreamHeader header = reader.header();

  PipelineStats stats;
  stats.n = header.n;
  const u64 batch = cfg.batch_size ? cfg.batch_size : header.n;
  stats.batch_size = batch;

  CountingSink sink(&user_sink);
  Ctx ctx;
  ctx.cfg = &cfg;
  ctx.n = header.n;
  ctx.batch = batch;
  ctx.stats = &stats;
  ctx.root = KeyedPrf(mix64(cfg.seed ^ 0x77736331ULL));

  std::unordered_map<u32, u64> degree;
  u64 maxdeg = 0;
  const std::optional<u64> declared = header.delta;

  // Whole-stream in-memory shortcut: a graph already inside the memory
  // budget is colored greedily in one pass.
  if (header.m && *header.m <= cfg.memory_budget_c * header.n) {
    EdgeSpool all(cfg.scratch_dir, cfg.spool_memory_edges);
    while (auto e = reader.next_edge()) {
      maxdeg = std::max(maxdeg, ++degree[e->u]);
      maxdeg = std::max(maxdeg, ++degree[e->v]);
      if (declared && maxdeg > *declared) {
        throw input_error("vertex degree exceeds the declared cap");
      }
      ++stats.edges_in;
      all.add(*e);
    }
    ColorNamespace base;
    base.epoch =
        std::max<u32>(1, floor_log2(ceil_pow2(declared ? *declared : maxdeg)));
    greedy_finish(ctx, base, all, sink);
    stats.epochs = stats.edges_in ? 1 : 0;
    stats.colors_emitted = sink.colors;
    return stats;
  }

  std::unique_ptr<Driver> driver;
  u64 epoch_delta = 0;

  if (declared) {
    epoch_delta = ceil_pow2(std::max<u64>(1, *declared));
    driver = make_epoch_driver(ctx, epoch_delta, sink);
    stats.epochs = 1;
    while (auto e = reader.next_edge()) {
      maxdeg = std::max(maxdeg, ++degree[e->u]);
      maxdeg = std::max(maxdeg, ++degree[e->v]);
      if (maxdeg > *declared) {
        throw input_error("vertex degree exceeds the declared cap");
      }
      ++stats.edges_in;
      driver->feed(*e);
    }
    driver->finish();
  } else {
    // Unknown cap: batches are parceled at the top; whenever a batch pushes
    // the observed maximum degree past the current estimate, the running
    // instance closes and a fresh epoch (with a disjoint namespace) takes
    // over from the triggering batch on.
    std::vector<Edge> top;
    top.reserve(batch);
    const auto dispatch = [&] {
      if (top.empty()) return;
      if (!driver || maxdeg > epoch_delta) {
        if (driver) driver->finish();
        epoch_delta = ceil_pow2(std::max<u64>(2, maxdeg));
        driver = make_epoch_driver(ctx, epoch_delta, sink);
        ++stats.epochs;
      }
      for (const Edge& e : top) driver->feed(e);
      top.clear();
    };
    while (auto e = reader.next_edge()) {
      maxdeg = std::max(maxdeg, ++degree[e->u]);
      maxdeg = std::max(maxdeg, ++degree[e->v]);
      ++stats.edges_in;
      top.push_back(*e);
      if (top.size() == batch) dispatch();
    }
    dispatch();
    if (driver) driver->finish();
  }

  stats.colors_emitted = sink.colors;
  return stats;
}

}  // namespace wsc
