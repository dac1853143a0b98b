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

#include "mbt/sut_sim.hpp"

#include <memory>
#include <set>

#include <gtest/gtest.h>

#include "mbt/error.hpp"
#include "mbt/run_log.hpp"

namespace mbt {
namespace {

constexpr const char* kTwoPages = R"({
  "initialPage": "a",
  "pages": [
    {"id": "a",
     "elements": {"go": {"next": "b", "server": [{"source": "S.java", "total": 10,
                                                  "lines": [1, 2]}]},
                  "stay": {"next": "a"}},
     "verifications": ["n_a"],
     "clientSources": [{"source": "a.js", "total": 4, "lines": [1, 2]}]},
    {"id": "b",
     "elements": {"back": {"next": "a"}},
     "verifications": ["n_b"],
     "clientSources": [{"source": "b.js", "total": 2, "lines": [2]}]}
  ],
  "faults": []
})";

Clock frozen() {
  return [] { return std::int64_t{0}; };
}

std::string error_of(const std::string& doc) {
  try {
    parse_sut_spec(doc);
  } catch (const SutError& e) {
    return e.what();
  }
  return "";
}

std::string with(std::string doc, const std::string& from, const std::string& to) {
  auto pos = doc.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return doc.replace(pos, from.size(), to);
}

TEST(SutSpecTest, Parses) {
  SutSpec spec = parse_sut_spec(kTwoPages);
  ASSERT_EQ(spec.pages.size(), 2u);
  EXPECT_EQ(spec.initial_page, "a");
  const Page* a = spec.find_page("a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->elements.at("go").next_page, "b");
  EXPECT_EQ(a->elements.at("go").server[0].lines, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(spec.find_page("zz"), nullptr);
  EXPECT_EQ(parse_sut_spec(serialize_sut_spec(spec)), spec);
}

TEST(SutSpecTest, DemoFilesLoad) {
  SutSpec plain = load_sut_spec(MBT_DATA_DIR "/demo_sut.json");
  EXPECT_EQ(plain.pages.size(), 2u);
  EXPECT_TRUE(plain.faults.empty());
  SutSpec faulty = load_sut_spec(MBT_DATA_DIR "/demo_sut_fault.json");
  ASSERT_EQ(faulty.faults.size(), 1u);
  EXPECT_EQ(faulty.faults[0].id, "F-LOGIN-REDIRECT");
  EXPECT_THROW(load_sut_spec("/nonexistent/sut.json"), SutError);
}

TEST(SutSpecTest, Rejections) {
  const std::string doc = kTwoPages;
  EXPECT_FALSE(error_of(with(doc, R"("next": "b")", R"("next": "c")")).empty());
  EXPECT_FALSE(error_of(with(doc, R"("initialPage": "a")", R"("initialPage": "q")")).empty());
  EXPECT_FALSE(error_of(with(doc, R"({"id": "b",)", R"({"id": "a",)")).empty());
  EXPECT_FALSE(error_of(with(doc, R"("lines": [1, 2]})", R"("lines": [1, 11]})")).empty());
  EXPECT_FALSE(error_of(with(doc, R"("lines": [1, 2]})", R"("lines": [0]})")).empty());
  EXPECT_FALSE(error_of(with(doc, R"("faults": [])", R"("extra": 1, "faults": [])")).empty());
  EXPECT_FALSE(error_of("[").empty());
  // A fault must name an element that exists.
  std::string unknown = error_of(with(
      doc, R"("faults": [])",
      R"("faults": [{"id": "F", "element": "nope", "behavior": "verification_fail"}])"));
  EXPECT_NE(unknown.find("nope"), std::string::npos) << unknown;
  EXPECT_FALSE(error_of(with(doc, R"("faults": [])",
                             R"("faults": [{"id": "F", "element": "go",
                                            "behavior": "wrong_page", "page": "zz"}])"))
                   .empty());
  EXPECT_FALSE(error_of(with(doc, R"("faults": [])",
                             R"("faults": [{"id": "F", "element": "go",
                                            "behavior": "explode"}])"))
                   .empty());
}

TEST(SimTest, ExecuteFollowsBindings) {
  SutSpec spec = parse_sut_spec(kTwoPages);
  SimState st = sim_start(spec);
  EXPECT_EQ(st.page, "a");
  SimStep step = sim_execute_edge(spec, st, "go", 1.5);
  EXPECT_TRUE(step.outcome.ok);
  EXPECT_EQ(st.page, "b");
  ASSERT_EQ(step.events.size(), 2u);
  EXPECT_EQ(step.events[0].scope, Scope::kServer);
  EXPECT_EQ(step.events[0].source_id, "S.java");
  EXPECT_EQ(step.events[1].scope, Scope::kClient);
  EXPECT_EQ(step.events[1].page_id, "b");
  EXPECT_EQ(step.events[1].timestamp_s, 1.5);
  EXPECT_EQ(sim_verify_vertex(spec, st, "n_b").verdict, Verdict::kPass);
  EXPECT_EQ(sim_verify_vertex(spec, st, "n_a").verdict, Verdict::kFail);
  // "go" is not available on page b.
  SimStep stray = sim_execute_edge(spec, st, "go", 2);
  EXPECT_FALSE(stray.outcome.ok);
  EXPECT_FALSE(stray.outcome.fault_id);
  EXPECT_EQ(st.page, "b");
}

TEST(SimTest, WrongPageFaultIsReportedDownstream) {
  SutSpec spec = parse_sut_spec(with(
      kTwoPages, R"("faults": [])",
      R"("faults": [{"id": "F-GO", "element": "go", "behavior": "wrong_page", "page": "a"}])"));
  SimState st = sim_start(spec);
  SimStep step = sim_execute_edge(spec, st, "go", 0);
  EXPECT_TRUE(step.outcome.ok) << "the action itself appears to succeed";
  EXPECT_EQ(st.page, "a");
  EXPECT_EQ(st.misrouted_by, "F-GO");
  VerificationOutcome v = sim_verify_vertex(spec, st, "n_b");
  EXPECT_EQ(v.verdict, Verdict::kFail);
  EXPECT_EQ(v.fault_id, "F-GO");
  EXPECT_FALSE(v.message.empty());
}

TEST(SimTest, VerificationFault) {
  SutSpec spec = parse_sut_spec(with(
      kTwoPages, R"("faults": [])",
      R"("faults": [{"id": "F-A", "element": "n_a", "behavior": "verification_fail"}])"));
  SimState st = sim_start(spec);
  VerificationOutcome v = sim_verify_vertex(spec, st, "n_a");
  EXPECT_EQ(v.verdict, Verdict::kFail);
  EXPECT_EQ(v.fault_id, "F-A");
}

TEST(SimAdapterTest, TracksPagesAndCoverage) {
  SimAdapter sim(parse_sut_spec(kTwoPages), frozen());
  EXPECT_EQ(sim.store().current_page(), "a");
  EXPECT_DOUBLE_EQ(sim.store().per_page_pct("a"), 50.0);
  EXPECT_TRUE(sim.binds("go"));
  EXPECT_TRUE(sim.binds("n_b"));
  EXPECT_FALSE(sim.binds("missing"));
  guard::Context ctx;
  EXPECT_TRUE(sim.execute_edge("go", ctx).ok);
  EXPECT_EQ(sim.store().current_page(), "b");
  EXPECT_DOUBLE_EQ(sim.store().cumulative_pct(Scope::kServer), 20.0);
  EXPECT_DOUBLE_EQ(sim.store().cumulative_pct(Scope::kClient), 50.0);  // 3 of 6
  EXPECT_TRUE(sim.execute_edge("back", ctx).ok);
  EXPECT_EQ(sim.store().current_page(), "a");
  for (const auto& e : sim.events()) {
    if (e.scope == Scope::kClient) EXPECT_TRUE(e.page_id.has_value());
  }
}

TEST(SimAdapterTest, RecoverReturnsToTheVertexPage) {
  SutSpec spec = parse_sut_spec(with(
      kTwoPages, R"("faults": [])",
      R"("faults": [{"id": "F-GO", "element": "go", "behavior": "wrong_page", "page": "a"}])"));
  SimAdapter sim(spec, frozen());
  guard::Context ctx;
  sim.execute_edge("go", ctx);
  EXPECT_EQ(sim.verify_vertex("n_b", ctx).fault_id, "F-GO");
  sim.recover("n_b", ctx);
  EXPECT_EQ(sim.state().page, "b");
  EXPECT_FALSE(sim.state().misrouted_by);
  EXPECT_EQ(sim.verify_vertex("n_b", ctx).verdict, Verdict::kPass);
}

TEST(SimAdapterTest, DemoRun) {
  Suite suite = load_suite(MBT_DATA_DIR "/demo_suite.json");
  SimAdapter sim(load_sut_spec(MBT_DATA_DIR "/demo_sut.json"), frozen());
  RunConfig cfg;
  cfg.seed = 3;
  cfg.clock = frozen();
  RunReport r = run_online(suite, parse_generator_spec("random"),
                           parse_stop_spec("edge_coverage(100)"), sim, cfg);
  EXPECT_EQ(r.halt, HaltReason::kStopFulfilled);
  EXPECT_EQ(r.verdict, Verdict::kPass);
  EXPECT_EQ(r.final_coverage.edges_covered, 4u);
  EXPECT_GT(sim.store().cumulative_pct(Scope::kServer), 0.0);
}

TEST(SimAdapterTest, DemoFaultIsFound) {
  Suite suite = load_suite(MBT_DATA_DIR "/demo_suite.json");
  SimAdapter sim(load_sut_spec(MBT_DATA_DIR "/demo_sut_fault.json"), frozen());
  RunConfig cfg;
  cfg.seed = 3;
  cfg.clock = frozen();
  cfg.failure_policy = FailurePolicy::kContinue;
  RunReport r = run_online(suite, parse_generator_spec("quickrandom"),
                           parse_stop_spec("edge_coverage(100) or length(200)"), sim, cfg);
  EXPECT_EQ(r.verdict, Verdict::kFail);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures[0].fault_id, "F-LOGIN-REDIRECT");
}

TEST(SimAdapterTest, Deterministic) {
  Suite suite = load_suite(MBT_DATA_DIR "/demo_suite.json");
  auto run = [&] {
    SimAdapter sim(load_sut_spec(MBT_DATA_DIR "/demo_sut.json"), frozen());
    RunConfig cfg;
    cfg.seed = 9;
    cfg.clock = frozen();
    RunReport r = run_online(suite, parse_generator_spec("random"),
                             parse_stop_spec("length(40)"), sim, cfg);
    return std::make_pair(export_run_log(r), sim.events());
  };
  EXPECT_EQ(run(), run());
}

TEST(SynthesizeTest, Scale) {
  SyntheticSystem sys = synthesize({18, 160, 83, 0, 3, 7});
  EXPECT_EQ(sys.suite.models().size(), 18u);
  EXPECT_EQ(sys.suite.vertex_count(), 177u);
  EXPECT_EQ(sys.suite.edge_count(), 260u);
  EXPECT_EQ(sys.sut.pages.size(), 160u);
  EXPECT_TRUE(validate_suite(sys.suite).empty());
  std::vector<bool> reach = reachable_vertices(sys.suite, sys.suite.entry_vertex());
  EXPECT_EQ(std::count(reach.begin(), reach.end(), true), 177);
  EXPECT_EQ(sys.suite.requirements_universe().size(), 160u);
  EXPECT_THROW(synthesize({5, 5, 0, 0, 3, 1}), SutError);
}

TEST(SynthesizeTest, FaultsAreDistinctAndFound) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSystem sys = synthesize({1, 6, 4, 5, 3, seed});
    ASSERT_EQ(sys.sut.faults.size(), 5u);
    std::set<std::string> elements;
    for (const auto& f : sys.sut.faults) elements.insert(f.element);
    EXPECT_EQ(elements.size(), 5u);

    SimAdapter sim(sys.sut, frozen());
    RunConfig cfg;
    cfg.seed = seed;
    cfg.clock = frozen();
    cfg.failure_policy = FailurePolicy::kContinue;
    RunReport r = run_online(sys.suite, parse_generator_spec("quickrandom"),
                             parse_stop_spec("edge_coverage(100)"), sim, cfg);
    EXPECT_EQ(r.halt, HaltReason::kStopFulfilled);
    std::set<std::string> found;
    for (const auto& f : r.failures) {
      if (f.fault_id) found.insert(*f.fault_id);
    }
    std::set<std::string> planted;
    for (const auto& f : sys.sut.faults) planted.insert(f.id);
    EXPECT_EQ(found, planted) << "seed " << seed;
  }
}

TEST(SynthesizeTest, SameSeedSameSystem) {
  SyntheticSystem a = synthesize({3, 20, 10, 4, 3, 5});
  SyntheticSystem b = synthesize({3, 20, 10, 4, 3, 5});
  EXPECT_TRUE(a.suite == b.suite);
  EXPECT_EQ(a.sut, b.sut);
  SyntheticSystem c = synthesize({3, 20, 10, 4, 3, 6});
  EXPECT_FALSE(c.sut == a.sut);
}

}  // namespace
}  // namespace mbt
