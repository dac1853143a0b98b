// Copyright 2026 The mbtlite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance checks. One PASS/FAIL line per criterion; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mbt/batch.hpp"
#include "mbt/cli.hpp"
#include "mbt/coverage.hpp"
#include "mbt/engine.hpp"
#include "mbt/error.hpp"
#include "mbt/generators.hpp"
#include "mbt/model.hpp"
#include "mbt/run_log.hpp"
#include "mbt/stop.hpp"
#include "mbt/sut_sim.hpp"
#include "test_util.hpp"

namespace {

using namespace mbt;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // 0 = no runtime limit
  std::function<Outcome()> check;
};

Clock frozen() {
  return [] { return std::int64_t{0}; };
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

Outcome format_anchors() {
  CoverageSnapshot s;
  s.models_reached = 15;
  s.models_total = 18;
  s.vertices_covered = 42;
  s.vertices_total = 170;
  s.vertices_executed = 42;
  s.edges_covered = 46;
  s.edges_total = 260;
  s.edges_executed = 46;
  s.elapsed_us = 560'000'000;
  const std::string stats = format_stats(s);
  bool ok = format_ratio(42, 170) == "42/170 = 24.71%" &&
            format_ratio(46, 260) == "46/260 = 17.69%" && format_elapsed(560) == "00:09:20" &&
            contains(stats, "42/170 = 24.71%") && contains(stats, "46/260 = 17.69%") &&
            contains(stats, "00:09:20");
  return {ok, ok ? "24.71%, 17.69%, 00:09:20" : "got:\n" + stats};
}

Outcome shortest_path_oracle() {
  std::mt19937_64 rng(20260101);
  int mismatches = 0;
  int reachable = 0;
  for (int round = 0; round < 200; ++round) {
    int n = 1 + static_cast<int>(rng() % 10);
    int m = static_cast<int>(rng() % static_cast<unsigned>(2 * n + 1));
    std::vector<testing::EdgeSpec> edges;
    for (int k = 0; k < m; ++k) {
      edges.push_back({static_cast<int>(rng() % n), static_cast<int>(rng() % n)});
    }
    std::map<int, std::string> labels;
    for (int v = 0; v < n; ++v) {
      if (rng() % 4 == 0) labels[v] = rng() % 2 ? "A" : "B";
    }
    Suite s = testing::graph_suite(n, edges, labels);
    auto g = testing::plain_graph(s.models()[0]);
    WalkState st = WalkState::start(s, static_cast<std::uint64_t>(round));

    int target = static_cast<int>(rng() % n);
    int expect = testing::exhaustive_min_hops(g, 0, target);
    int got = testing::kInfinity;
    try {
      got = static_cast<int>(
          plan_astar(s, st, {ElementKind::kVertex, static_cast<std::size_t>(target)})
              .edge_count());
    } catch (const UnreachableError&) {
    }
    if (got != expect) ++mismatches;
    if (expect != testing::kInfinity) ++reachable;

    if (m > 0) {
      std::size_t k = rng() % static_cast<std::size_t>(m);
      int expect_e = testing::exhaustive_min_hops_through_edge(g, 0, k);
      int got_e = testing::kInfinity;
      try {
        got_e = static_cast<int>(plan_astar(s, st, {ElementKind::kEdge, k}).edge_count());
      } catch (const UnreachableError&) {
      }
      if (got_e != expect_e) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches, " +
                               std::to_string(reachable) + "/200 vertex targets reachable"};
}

Outcome weighted_selection() {
  constexpr int kDraws = 10'000;
  std::string detail;
  bool ok = true;
  auto fan = [&](std::optional<double> w1, std::optional<double> w2, double p1) {
    Suite s = testing::graph_suite(3, {{0, 1, w1}, {0, 2, w2}, {1, 0}, {2, 0}});
    WalkState st = WalkState::start(s, 99);
    int first = 0;
    for (int i = 0; i < kDraws; ++i) {
      st.position = 0;
      if (next_step_weighted(s, st).index == 0) ++first;
    }
    double sigma = testing::binomial_sigma(kDraws, p1);
    double dev = std::abs(first - kDraws * p1);
    ok = ok && dev <= 3 * sigma;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s%.4f vs %.4f (%.1f sigma)", detail.empty() ? "" : "; ",
                  static_cast<double>(first) / kDraws, p1, dev / sigma);
    detail += buf;
  };
  fan(0.9, 0.1, 0.9);
  fan(0.5, std::nullopt, 1.0 / 3.0);
  return {ok, detail};
}

Outcome termination() {
  std::mt19937_64 rng(4);
  Suite s = testing::graph_suite(6, testing::strongly_connected_edges(6, 4, rng));
  std::vector<std::uint64_t> seeds(100);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  auto results = run_batch_parallel(s, parse_generator_spec("random"),
                                    parse_stop_spec("edge_coverage(100)"), seeds, {10'000});
  int bad = 0;
  std::uint64_t longest = 0;
  for (const auto& r : results) {
    if (r.halt != HaltReason::kStopFulfilled || r.coverage.edges_covered != 10) ++bad;
    longest = std::max(longest, r.coverage.edges_executed);
  }
  return {s.edge_count() == 10 && bad == 0,
          std::to_string(bad) + " incomplete runs, longest " + std::to_string(longest) +
              " steps"};
}

Outcome distinct_count() {
  Suite s = testing::graph_suite(
      4, {{0, 0, {}, "n < 5", {"n = n + 1"}}, {1, 2}, {2, 3}, {3, 1}}, {}, {"n = 0"});
  PassingAdapter adapter;
  RunConfig cfg;
  cfg.clock = frozen();
  RunReport r =
      run_online(s, parse_generator_spec("random"), parse_stop_spec("never"), adapter, cfg);
  const std::string stats = format_stats(r.final_coverage);
  bool ok = r.final_coverage.edges_executed == 5 && contains(stats, "1/4 = 25.00%");
  return {ok, "edges executed " + std::to_string(r.final_coverage.edges_executed) + ", " +
                  format_ratio(r.final_coverage.edges_covered, r.final_coverage.edges_total)};
}

Outcome requirement_outcome() {
  std::vector<std::pair<Suite, std::string>> suites;
  suites.emplace_back(load_suite(MBT_DATA_DIR "/demo_suite.json"), "demo");
  suites.emplace_back(synthesize({18, 160, 83, 0, 3, 11}).suite, "synthetic-18");
  suites.emplace_back(synthesize({3, 12, 6, 0, 2, 5}).suite, "synthetic-3");
  int runs = 0;
  int bad = 0;
  StopCondition stop = parse_stop_spec("edge_coverage(100)");
  for (const auto& [suite, name] : suites) {
    for (const char* g : {"random", "weighted", "quickrandom"}) {
      std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
      for (const auto& r : run_batch_parallel(suite, parse_generator_spec(g), stop, seeds)) {
        if (r.halt != HaltReason::kStopFulfilled) continue;
        ++runs;
        std::string req = format_ratio(r.coverage.requirements_covered,
                                       r.coverage.requirements_total);
        if (!req.ends_with("= 100.00%")) ++bad;
      }
    }
  }
  return {runs > 0 && bad == 0,
          std::to_string(runs) + " runs halted by edge_coverage(100), " + std::to_string(bad) +
              " below 100.00%"};
}

Outcome fault_detection() {
  int missed = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSystem sys = synthesize({1, 6, 4, 5, 3, seed});
    SimAdapter sim(sys.sut, frozen());
    RunConfig cfg;
    cfg.seed = seed;
    cfg.clock = frozen();
    cfg.failure_policy = FailurePolicy::kContinue;
    RunReport r = run_online(sys.suite, parse_generator_spec("random"),
                             parse_stop_spec("edge_coverage(100)"), sim, cfg);
    std::set<std::string> found;
    for (const auto& f : r.failures) {
      if (f.fault_id) found.insert(*f.fault_id);
    }
    std::size_t hit = 0;
    for (const auto& f : sys.sut.faults) hit += found.count(f.id);
    if (sys.sut.faults.size() != 5 || hit != 5 || r.halt != HaltReason::kStopFulfilled) ++missed;
    detail += (detail.empty() ? "" : " ") + std::to_string(hit) + "/5";
  }
  return {missed == 0, "faults found per seed: " + detail};
}

Outcome fold_oracle() {
  fs::path root = testing::fresh_temp_dir("acceptance");
  struct Case {
    std::string suite, sut, generator, policy;
    std::uint64_t seed;
  };
  std::vector<Case> cases;
  const std::string demo = MBT_DATA_DIR "/demo_suite.json";
  for (const char* g : {"random", "weighted", "quickrandom", "astar:dashboard/login"}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      cases.push_back({demo, MBT_DATA_DIR "/demo_sut.json", g, "abort", seed});
      cases.push_back({demo, MBT_DATA_DIR "/demo_sut_fault.json", g, "continue", seed});
      cases.push_back({demo, MBT_DATA_DIR "/demo_sut_fault.json", g, "abort", seed});
    }
  }
  SyntheticSystem sys = synthesize({18, 160, 83, 8, 3, 2});
  spill(root / "synth_suite.json", serialize_suite(sys.suite));
  spill(root / "synth_sut.json", serialize_sut_spec(sys.sut));
  for (const char* g : {"random", "quickrandom"}) {
    cases.push_back({(root / "synth_suite.json").string(), (root / "synth_sut.json").string(),
                     g, "continue", 7});
  }
  int bad = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    RunOptions o;
    o.suite_path = cases[i].suite;
    o.sut_path = cases[i].sut;
    o.generator = cases[i].generator;
    o.stop = "edge_coverage(100) or length(2000)";
    o.seed = cases[i].seed;
    o.on_failure = cases[i].policy;
    o.interval_s = 0.001;
    o.out_dir = root / ("run" + std::to_string(i));
    std::ostringstream out, err;
    int code = cmd_run(o, out, err);
    std::ostringstream rep, rep_err;
    if (code == kExitError || cmd_report(o.out_dir, rep, rep_err) != kExitPass ||
        rep.str() != slurp(o.out_dir / kSummaryFile)) {
      ++bad;
    }
  }
  fs::remove_all(root);
  return {bad == 0, std::to_string(cases.size()) + " runs, " + std::to_string(bad) +
                        " summaries not reproduced"};
}

Outcome cumulative_drop() {
  CoverageStore store;
  std::vector<std::uint32_t> half(50);
  std::iota(half.begin(), half.end(), 1u);
  store.ingest({0.0, Scope::kClient, "A.js", "p", 100, half});
  double before = store.cumulative_pct(Scope::kClient);
  store.ingest({1.0, Scope::kClient, "B.js", "p", 100, {}});
  double after = store.cumulative_pct(Scope::kClient);
  bool drop_ok = format_ratio(50, 100).ends_with("50.00%") && before == 50.0 && after == 25.0;

  // Server cumulative over simulator runs, counted once every server source
  // has been seen (a fixed source set).
  int decreases = 0;
  int observed = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SyntheticSystem sys = synthesize({2, 12, 8, 0, 1 + seed % 3, seed});
    std::set<std::string> all_sources;
    for (const auto& page : sys.sut.pages) {
      for (const auto& [name, effect] : page.elements) {
        for (const auto& src : effect.server) all_sources.insert(src.source);
      }
    }
    SimAdapter sim(sys.sut, frozen());
    guard::Context ctx;
    WalkState st = WalkState::start(sys.suite, seed);
    double last = -1.0;
    for (int step = 0; step < 400; ++step) {
      auto enabled = enabled_out_edges(sys.suite, st);
      if (enabled.empty()) break;
      std::size_t e = enabled[st.rng.below(enabled.size())];
      sim.execute_edge(sys.suite.edge(e).name, ctx);
      st.position = sys.suite.edge_target(e);
      if (sim.store().source_count(Scope::kServer) < all_sources.size()) continue;
      double now = sim.store().cumulative_pct(Scope::kServer);
      ++observed;
      if (now < last) ++decreases;
      last = now;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "client %.2f%% -> %.2f%%; server: %d decreases over %d samples", before, after,
                decreases, observed);
  return {drop_ok && decreases == 0 && observed > 0, buf};
}

Outcome determinism() {
  const char* path = MBT_DATA_DIR "/demo_suite.json";
  std::ostringstream err;
  auto gen = [&](std::uint64_t seed) {
    std::ostringstream out;
    cmd_generate(path, "random", "length(25)", seed, out, err);
    return out.str();
  };
  std::string a = gen(42);
  std::string b = gen(42);
  int differing = 0;
  std::string base = gen(0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) differing += gen(seed) != base;
  bool ok = !a.empty() && a == b && differing >= 1;
  return {ok, std::string(a == b ? "same seed identical" : "same seed differs") + ", " +
                  std::to_string(differing) + "/10 other seeds differ"};
}

Outcome quickrandom_efficiency() {
  std::mt19937_64 rng(2026);
  Suite s = testing::graph_suite(8, testing::strongly_connected_edges(8, 12, rng));
  std::vector<std::uint64_t> seeds(100);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  StopCondition stop = parse_stop_spec("edge_coverage(100)");
  auto median = [&](const char* g, bool& complete) {
    auto results = run_batch_parallel(s, parse_generator_spec(g), stop, seeds, {1'000'000});
    std::vector<std::uint64_t> steps;
    for (const auto& r : results) {
      complete = complete && r.halt == HaltReason::kStopFulfilled;
      steps.push_back(r.coverage.edges_executed);
    }
    std::sort(steps.begin(), steps.end());
    return (static_cast<double>(steps[49]) + static_cast<double>(steps[50])) / 2.0;
  };
  bool complete = true;
  double qr = median("quickrandom", complete);
  double rw = median("random", complete);
  char buf[128];
  std::snprintf(buf, sizeof buf, "median edges: quickrandom %.1f, random %.1f", qr, rw);
  return {s.edge_count() == 20 && complete && qr < rw, buf};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "stats-format anchors", 1, format_anchors},
      {2, "shortest-path oracle", 10, shortest_path_oracle},
      {3, "weighted selection", 5, weighted_selection},
      {4, "edge-coverage termination", 10, termination},
      {5, "distinct-count semantics", 0, distinct_count},
      {6, "requirement coverage", 0, requirement_outcome},
      {7, "fault detection", 5, fault_detection},
      {8, "coverage-fold oracle", 0, fold_oracle},
      {9, "cumulative drop", 0, cumulative_drop},
      {10, "determinism", 0, determinism},
      {11, "quickrandom efficiency", 30, quickrandom_efficiency},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing;
    char buf[64];
    if (c.limit_s > 0) {
      std::snprintf(buf, sizeof buf, "%.3f s, limit %g s", secs, c.limit_s);
      if (secs >= c.limit_s) {
        o.pass = false;
        o.detail += "; over the time limit";
      }
    } else {
      std::snprintf(buf, sizeof buf, "%.3f s", secs);
    }
    timing = buf;
    if (!o.pass) ++failed;
    std::printf("%s %2d %s (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, timing.c_str(),
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
