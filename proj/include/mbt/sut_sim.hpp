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

// A simulated web application: named pages, element actions that move
// between pages, per-page verification names, injected faults, and
// synthetic code-coverage events. SimAdapter plugs it into the engine.
//
// Document format:
//
//   {
//     "initialPage": "login",
//     "pages": [
//       {"id": "login",
//        "elements": {"e_valid_login": {"next": "dashboard",
//                                       "server": [{"source": "Auth.java",
//                                                   "total": 40, "lines": [1, 2]}]}},
//        "verifications": ["v_login"],
//        "clientSources": [{"source": "login.js", "total": 10, "lines": [1]}]}
//     ],
//     "faults": [{"id": "F1", "element": "e_valid_login",
//                 "behavior": "wrong_page", "page": "login"},
//                {"id": "F2", "element": "v_login", "behavior": "verification_fail"}]
//   }

#ifndef MBT_SUT_SIM_HPP_
#define MBT_SUT_SIM_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/engine.hpp"
#include "mbt/model.hpp"

namespace mbt {

struct SourceLines {
  std::string source;
  std::uint32_t total = 0;
  std::vector<std::uint32_t> lines;  // sorted, unique, in [1, total]

  bool operator==(const SourceLines&) const = default;
};

struct TransitionEffect {
  std::string next_page;
  std::vector<SourceLines> server;

  bool operator==(const TransitionEffect&) const = default;
};

struct Page {
  std::string id;
  std::map<std::string, TransitionEffect, std::less<>> elements;
  std::set<std::string, std::less<>> verifications;
  std::vector<SourceLines> client_sources;

  bool operator==(const Page&) const = default;
};

struct FaultSpec {
  enum class Behavior { kWrongPage, kVerificationFail };

  std::string id;
  std::string element;
  Behavior behavior = Behavior::kVerificationFail;
  std::string page;  // kWrongPage only

  bool operator==(const FaultSpec&) const = default;
};

struct SutSpec {
  std::vector<Page> pages;
  std::string initial_page;
  std::vector<FaultSpec> faults;

  // nullptr when absent.
  const Page* find_page(std::string_view id) const;

  bool operator==(const SutSpec&) const = default;
};

// Throws SutError on unknown keys, duplicate ids, dangling page references,
// line numbers outside [1, total] or a fault bound to nothing.
SutSpec parse_sut_spec(std::string_view document);
SutSpec load_sut_spec(const std::filesystem::path& path);
std::string serialize_sut_spec(const SutSpec& spec);

struct SimState {
  std::string page;
  // Set while the simulator sits on a page a wrong_page fault sent it to.
  std::optional<std::string> misrouted_by;
};

SimState sim_start(const SutSpec& spec);

struct SimStep {
  ActionOutcome outcome;
  std::vector<CodeCoverageEvent> events;
};

// Applies the current page's binding for `name`, or the wrong_page fault
// bound to it. Server events for the transition come first, then client
// events for the page landed on, all stamped `timestamp_s`.
SimStep sim_execute_edge(const SutSpec& spec, SimState& state, std::string_view name,
                         double timestamp_s);

VerificationOutcome sim_verify_vertex(const SutSpec& spec, const SimState& state,
                                      std::string_view name);

// Client events for a visit to `page_id`.
std::vector<CodeCoverageEvent> page_visit_events(const SutSpec& spec,
                                                 std::string_view page_id,
                                                 double timestamp_s);

class SimAdapter final : public Adapter {
 public:
  // Emits the initial page visit. `clock` stamps events, in microseconds
  // relative to construction; steady_clock() when empty.
  explicit SimAdapter(SutSpec spec, Clock clock = {});

  // True for any element action or verification name of any page.
  bool binds(std::string_view name) const override;
  ActionOutcome execute_edge(std::string_view name, const guard::Context& ctx) override;
  VerificationOutcome verify_vertex(std::string_view name, const guard::Context& ctx) override;
  // Moves to the page that verifies `vertex_name`, if any, as a fresh visit.
  void recover(std::string_view vertex_name, const guard::Context& ctx) override;

  const SutSpec& spec() const { return spec_; }
  const SimState& state() const { return state_; }
  const CoverageStore& store() const { return store_; }
  const std::vector<CodeCoverageEvent>& events() const { return events_; }

 private:
  double now_s() const;
  void ingest(std::vector<CodeCoverageEvent> events);

  SutSpec spec_;
  Clock clock_;
  std::int64_t start_us_ = 0;
  SimState state_;
  CoverageStore store_;
  std::vector<CodeCoverageEvent> events_;
  std::set<std::string, std::less<>> names_;
};

// Builds a suite and a matching SUT. Every model has a home vertex sharing
// the label HOME (all on the single home page) and a cycle through its own
// pages; extra edges join random vertex pairs inside a model. Every vertex
// carries a requirement tag and every edge a distinct action name. Faults go
// to distinct edges (wrong_page) and non-home vertices (verification_fail).
struct SynthConfig {
  std::size_t models = 1;
  std::size_t pages = 6;  // home page included; needs pages > models
  std::size_t extra_edges = 0;
  std::size_t faults = 0;
  std::size_t server_sources = 3;
  std::uint64_t seed = 1;
};

struct SyntheticSystem {
  Suite suite;
  SutSpec sut;
};

// Throws SutError when the configuration cannot be met.
SyntheticSystem synthesize(const SynthConfig& cfg);

}  // namespace mbt

#endif  // MBT_SUT_SIM_HPP_
