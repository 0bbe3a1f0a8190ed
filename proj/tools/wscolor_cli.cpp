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

// Command-line driver: `gen` makes reproducible test streams, `color` runs
// the one-pass coloring pipeline, `verify` re-checks a finished run from the
// raw streams alone, and `bench` times the pipeline on a generated stream.
//
// Payload (stream or records) goes to --output / stdout; the line-oriented
// key=value report goes to stderr for `gen`/`color` and stdout for
// `verify`/`bench`. `color --summary FILE` additionally writes a JSON
// summary that carries everything `verify --summary` needs for the
// color-budget check.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wscolor/budget.hpp"
#include "wscolor/color_id.hpp"
#include "wscolor/common.hpp"
#include "wscolor/generate.hpp"
#include "wscolor/pipeline.hpp"
#include "wscolor/stream_io.hpp"
#include "wscolor/verifier.hpp"

namespace {

using nlohmann::json;
using namespace wsc;

u128 parse_u128(const std::string& s) {
  WSC_CHECK_MSG(!s.empty() && s.size() <= 39 &&
                    s.find_first_not_of("0123456789") == std::string::npos,
                "bad 128-bit integer '" + s + "'");
  u128 v = 0;
  for (char c : s) {
    const u128 next = v * 10 + u128(c - '0');
    WSC_CHECK_MSG(next / 10 == v, "128-bit integer overflow in '" + s + "'");
    v = next;
  }
  return v;
}

std::string epsilon_to_string(long double e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", e);
  return buf;
}

long double epsilon_from_string(const std::string& s) {
  return std::strtold(s.c_str(), nullptr);
}

// An input path of "-" means stdin; an output path of "-" means stdout.
std::istream& open_input(const std::string& path, std::ifstream& file) {
  if (path == "-") return std::cin;
  file.open(path);
  if (!file.good()) throw input_error("cannot open input file " + path);
  return file;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::trunc);
  if (!file.good()) throw input_error("cannot open output file " + path);
  return file;
}

json minted_to_json(const std::vector<NamespaceBudgetInput>& minted) {
  json arr = json::array();
  for (const NamespaceBudgetInput& in : minted) {
    arr.push_back({{"ns", in.ns.to_string()},
                   {"delta", in.delta},
                   {"batches", in.batches},
                   {"batch_bound", in.batch_bound},
                   {"epsilon", epsilon_to_string(in.epsilon)},
                   {"q", in.q},
                   {"lambda", u128_to_string(in.lambda)}});
  }
  return arr;
}

std::vector<NamespaceBudgetInput> minted_from_json(const json& arr) {
  std::vector<NamespaceBudgetInput> out;
  for (const json& j : arr) {
    NamespaceBudgetInput in;
    in.ns = ColorId::parse(j.at("ns").get<std::string>()).ns;
    in.delta = j.at("delta").get<u64>();
    in.batches = j.at("batches").get<u64>();
    in.batch_bound = j.at("batch_bound").get<u64>();
    in.epsilon = epsilon_from_string(j.at("epsilon").get<std::string>());
    in.q = j.at("q").get<u64>();
    in.lambda = parse_u128(j.at("lambda").get<std::string>());
    out.push_back(in);
  }
  return out;
}

void print_stats(std::ostream& os, const PipelineStats& s) {
  os << "n=" << s.n << '\n'
     << "batch_size=" << s.batch_size << '\n'
     << "edges_in=" << s.edges_in << '\n'
     << "colors_emitted=" << s.colors_emitted << '\n'
     << "greedy_edges=" << s.greedy_edges << '\n'
     << "epochs=" << s.epochs << '\n'
     << "layers=" << s.layers << '\n'
     << "max_depth=" << s.max_depth << '\n'
     << "mark_live_high_water=" << s.mark_live_high_water << '\n'
     << "store_count=" << s.store_count << '\n'
     << "space_bound_total=" << u128_to_string(s.space_bound_total) << '\n';
  for (const SchemeReport& r : s.schemes) {
    os << "scheme." << r.ns.to_string() << ".edges=" << r.edges << '\n'
       << "scheme." << r.ns.to_string() << ".colored=" << r.colored << '\n'
       << "scheme." << r.ns.to_string() << ".bots=" << r.bots << '\n'
       << "scheme." << r.ns.to_string() << ".batches=" << r.batches << '\n';
  }
  for (const SpaceReport& r : s.space) {
    os << "space." << r.ns.to_string() << "#" << r.f_idx
       << ".high_water=" << r.high_water << '\n'
       << "space." << r.ns.to_string() << "#" << r.f_idx
       << ".bound=" << r.bound << '\n';
  }
}

json stats_to_json(const PipelineStats& s, const PipelineConfig& cfg) {
  json schemes = json::array();
  for (const SchemeReport& r : s.schemes) {
    schemes.push_back({{"ns", r.ns.to_string()},
                       {"edges", r.edges},
                       {"colored", r.colored},
                       {"bots", r.bots},
                       {"batches", r.batches}});
  }
  json space = json::array();
  for (const SpaceReport& r : s.space) {
    space.push_back({{"ns", r.ns.to_string()},
                     {"f_idx", r.f_idx},
                     {"height", r.height},
                     {"high_water", r.high_water},
                     {"bound", r.bound}});
  }
  return {{"config",
           {{"mode", cfg.mode == Mode::kDet ? "det" : "rand"},
            {"epsilon", epsilon_to_string(cfg.epsilon)},
            {"seed", cfg.seed},
            {"batch_size", cfg.batch_size},
            {"multigraph", cfg.multigraph},
            {"force_det_path", cfg.force_det_path}}},
          {"stats",
           {{"n", s.n},
            {"batch_size", s.batch_size},
            {"edges_in", s.edges_in},
            {"colors_emitted", s.colors_emitted},
            {"greedy_edges", s.greedy_edges},
            {"epochs", s.epochs},
            {"layers", s.layers},
            {"max_depth", s.max_depth},
            {"mark_live_high_water", s.mark_live_high_water},
            {"store_count", s.store_count},
            {"space_bound_total", u128_to_string(s.space_bound_total)}}},
          {"schemes", schemes},
          {"space", space},
          {"minted", minted_to_json(s.minted)}};
}

struct GenCliSpec {
  std::string kind = "random-bipartite";
  std::string order = "random";
  GenSpec spec;
};

GenResult run_generator(GenCliSpec& g) {
  WSC_CHECK_MSG(gen_kind_from_string(g.kind, &g.spec.kind),
                "unknown generator kind " + g.kind);
  WSC_CHECK_MSG(gen_order_from_string(g.order, &g.spec.order),
                "unknown arrival order " + g.order);
  return generate_stream(g.spec);
}

void add_gen_options(CLI::App* app, GenCliSpec& g) {
  app->add_option("--kind", g.kind, "Stream shape")
      ->check(CLI::IsMember({"random-bipartite", "unbalanced-stars",
                             "d-regular-batches", "multigraph"}));
  app->add_option("--n", g.spec.n, "Vertex count")->required();
  app->add_option("--delta", g.spec.delta, "Degree cap")->required();
  app->add_option("--seed", g.spec.seed, "Generator seed");
  app->add_option("--order", g.order, "Arrival order within blocks")
      ->check(CLI::IsMember({"adversarial-sorted", "random"}));
  app->add_option("--d", g.spec.d, "Per-block degree (d-regular kind)");
  app->add_option("--target-edges", g.spec.target_edges,
                  "Approximate stream volume (0 = kind default)");
}

void add_color_options(CLI::App* app, PipelineConfig& cfg, std::string& mode) {
  app->add_option("--mode", mode, "Coloring mode")
      ->check(CLI::IsMember({"rand", "det"}));
  app->add_option("--epsilon", cfg.epsilon, "Color-budget exponent knob");
  app->add_option("--seed", cfg.seed, "PRNG seed (rand mode)");
  app->add_option("--batch-size", cfg.batch_size,
                  "Edges per batch (0 = the header vertex count; smaller "
                  "values void the budget certificate)");
  app->add_flag("--multigraph", cfg.multigraph,
                "Enable the parallel-edge pair reduction");
  app->add_flag("--force-det-path", cfg.force_det_path,
                "Exercise the deterministic expander path at desk scale");
  app->add_flag("--instrument", cfg.instrument,
                "Collect per-store space reports");
  app->add_flag("--validate-marks", cfg.validate_marks,
                "Run the structural mark validators every batch");
  app->add_option("--max-depth", cfg.max_depth,
                  "Residual recursion cap (0 = statistical cap)");
  app->add_option("--memory-budget", cfg.memory_budget_c,
                  "Greedy finisher threshold, in multiples of n edges");
  app->add_option("--scratch-dir", cfg.scratch_dir,
                  "Directory for residual spill files (empty = in memory)");
}

int cmd_gen(GenCliSpec& g, const std::string& out_path) {
  const GenResult gen = run_generator(g);
  std::ofstream file;
  std::ostream& os = open_output(out_path, file);
  write_stream(os, gen);
  os.flush();
  std::cerr << "kind=" << g.kind << '\n'
            << "n=" << gen.header.n << '\n'
            << "delta=" << *gen.header.delta << '\n'
            << "edges=" << gen.edges.size() << '\n'
            << "block=" << gen.block << '\n';
  return 0;
}

int cmd_color(const std::string& in_path, const std::string& out_path,
              const std::string& mode, PipelineConfig& cfg,
              const std::string& summary_path) {
  cfg.mode = mode == "det" ? Mode::kDet : Mode::kRand;
  std::ifstream in_file;
  std::istream& in = open_input(in_path, in_file);
  std::ofstream out_file;
  std::ostream& out = open_output(out_path, out_file);
  TextRecordSink sink(out);
  const PipelineStats stats = run_pipeline(in, sink, cfg);
  out.flush();
  print_stats(std::cerr, stats);
  if (!summary_path.empty()) {
    std::ofstream sf(summary_path, std::ios::trunc);
    if (!sf.good()) {
      throw input_error("cannot open summary file " + summary_path);
    }
    sf << stats_to_json(stats, cfg).dump(2) << '\n';
  }
  return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& records_path,
               const std::string& summary_path, bool allow_bot,
               u64 max_errors) {
  VerifyOptions opt;
  opt.allow_bot = allow_bot;
  opt.max_errors = max_errors;

  std::ifstream graph(graph_path);
  if (!graph.good()) throw input_error("cannot open graph " + graph_path);
  std::ifstream records(records_path);
  if (!records.good()) {
    throw input_error("cannot open records " + records_path);
  }
  const VerifyReport rep = verify_proper(graph, records, opt);
  std::cout << "proper=" << (rep.ok ? 1 : 0) << '\n'
            << "edges=" << rep.edges << '\n'
            << "records=" << rep.records << '\n'
            << "colored=" << rep.colored << '\n'
            << "bots=" << rep.bots << '\n'
            << "missing=" << rep.missing << '\n'
            << "duplicate_records=" << rep.duplicate_records << '\n'
            << "conflicts=" << rep.conflicts << '\n';
  for (const std::string& e : rep.errors) std::cout << "error=" << e << '\n';

  bool budget_ok = true;
  if (!summary_path.empty()) {
    std::ifstream sf(summary_path);
    if (!sf.good()) throw input_error("cannot open summary " + summary_path);
    json j;
    sf >> j;
    const auto minted = minted_from_json(j.at("minted"));
    std::ifstream records2(records_path);
    const BudgetReport bud = verify_budget(records2, minted);
    budget_ok = bud.ok;
    std::cout << "budget_ok=" << (bud.ok ? 1 : 0) << '\n';
    for (const NamespaceTally& t : bud.tallies) {
      std::cout << "budget." << t.ns.to_string()
                << ".distinct=" << t.distinct_colors << '\n'
                << "budget." << t.ns.to_string()
                << ".bound=" << u128_to_string(t.budget) << '\n';
    }
    for (const std::string& e : bud.errors) {
      std::cout << "error=" << e << '\n';
    }
  }
  return rep.ok && budget_ok ? 0 : 1;
}

int cmd_bench(GenCliSpec& g, const std::string& mode, PipelineConfig& cfg,
              u64 runs) {
  cfg.mode = mode == "det" ? Mode::kDet : Mode::kRand;
  const GenResult gen = run_generator(g);
  std::ostringstream stream_text;
  write_stream(stream_text, gen);

  struct DiscardSink : RecordSink {
    u64 colors = 0;
    u64 bots = 0;
    void emit_color(u64, const ColorId&) override { ++colors; }
    void emit_bot(u64) override { ++bots; }
  };

  long double total_sec = 0;
  u64 colors = 0;
  for (u64 i = 0; i < runs; ++i) {
    std::istringstream in(stream_text.str());
    DiscardSink sink;
    const auto start = std::chrono::steady_clock::now();
    run_pipeline(in, sink, cfg);
    const auto stop = std::chrono::steady_clock::now();
    total_sec += std::chrono::duration<long double>(stop - start).count();
    colors = sink.colors;
  }
  const long double mean_sec = total_sec / runs;
  std::cout << "edges=" << gen.edges.size() << '\n'
            << "runs=" << runs << '\n'
            << "colors=" << colors << '\n'
            << "mean_seconds=" << double(mean_sec) << '\n'
            << "edges_per_second="
            << double(gen.edges.size() / std::max(mean_sec, 1e-9L)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"W-streaming edge-coloring toolkit"};
  app.require_subcommand(1);

  // gen
  GenCliSpec gen_spec;
  std::string gen_out = "-";
  CLI::App* gen = app.add_subcommand("gen", "Generate a test stream");
  add_gen_options(gen, gen_spec);
  gen->add_option("--output,-o", gen_out, "Stream file (- = stdout)");

  // color
  PipelineConfig color_cfg;
  std::string color_mode = "rand";
  std::string color_in = "-";
  std::string color_out = "-";
  std::string color_summary;
  CLI::App* color = app.add_subcommand("color", "Color an edge stream");
  color->add_option("input", color_in, "Stream file (- = stdin)");
  color->add_option("--output,-o", color_out, "Record file (- = stdout)");
  add_color_options(color, color_cfg, color_mode);
  color->add_option("--summary", color_summary,
                    "Write a machine-readable JSON summary here");

  // verify
  std::string v_graph, v_records, v_summary;
  bool v_allow_bot = false;
  u64 v_max_errors = 16;
  CLI::App* verify =
      app.add_subcommand("verify", "Re-check a finished run from its streams");
  verify->add_option("--graph", v_graph, "Input stream file")->required();
  verify->add_option("--records", v_records, "Color record file")->required();
  verify->add_option("--summary", v_summary,
                     "JSON summary from `color` (enables the budget check)");
  verify->add_flag("--allow-bot", v_allow_bot,
                   "Accept deliberately uncolored records");
  verify->add_option("--max-errors", v_max_errors, "Error report cap");

  // bench
  GenCliSpec bench_spec;
  PipelineConfig bench_cfg;
  std::string bench_mode = "rand";
  u64 bench_runs = 3;
  CLI::App* bench =
      app.add_subcommand("bench", "Time the pipeline on a generated stream");
  add_gen_options(bench, bench_spec);
  add_color_options(bench, bench_cfg, bench_mode);
  bench->add_option("--runs", bench_runs, "Timed repetitions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_spec, gen_out);
    if (color->parsed()) {
      return cmd_color(color_in, color_out, color_mode, color_cfg,
                       color_summary);
    }
    if (verify->parsed()) {
      return cmd_verify(v_graph, v_records, v_summary, v_allow_bot,
                        v_max_errors);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_spec, bench_mode, bench_cfg, bench_runs);
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const contract_error& e) {
    std::cerr << "internal invariant failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
