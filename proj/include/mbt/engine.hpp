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

// The step loop. Online runs drive an Adapter; offline generation drives a
// virtual adapter that always passes, so both produce the same step sequence
// for the same (suite, generator, stop, seed).
//
// One iteration: check the stop condition, pick the next edge, execute it
// through the adapter, apply its actions, verify the target vertex, then
// resolve a shared-state jump if the target carries a label.

#ifndef MBT_ENGINE_HPP_
#define MBT_ENGINE_HPP_

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/generators.hpp"
#include "mbt/guard.hpp"
#include "mbt/model.hpp"
#include "mbt/stop.hpp"

namespace mbt {

enum class Verdict { kPass, kFail };

struct ActionOutcome {
  bool ok = true;
  std::string message;
  std::optional<std::string> fault_id;
};

struct VerificationOutcome {
  Verdict verdict = Verdict::kPass;
  std::string message;  // set when verdict is kFail
  std::optional<std::string> fault_id;
};

// Binds model elements to the system under test by name.
class Adapter {
 public:
  virtual ~Adapter() = default;

  virtual bool binds(std::string_view name) const = 0;
  virtual ActionOutcome execute_edge(std::string_view name, const guard::Context& ctx) = 0;
  virtual VerificationOutcome verify_vertex(std::string_view name,
                                            const guard::Context& ctx) = 0;

  // Called after a failed verification when the run continues past
  // failures, so the adapter can put the SUT back where the model is.
  virtual void recover(std::string_view vertex_name, const guard::Context& ctx) {
    (void)vertex_name;
    (void)ctx;
  }
};

// Binds every name and never fails.
class PassingAdapter final : public Adapter {
 public:
  bool binds(std::string_view) const override { return true; }
  ActionOutcome execute_edge(std::string_view, const guard::Context&) override { return {}; }
  VerificationOutcome verify_vertex(std::string_view, const guard::Context&) override {
    return {};
  }
};

// Monotonic microseconds.
using Clock = std::function<std::int64_t()>;
Clock steady_clock();

enum class FailurePolicy { kAbort, kContinue };

struct RunConfig {
  std::uint64_t seed = 0;
  FailurePolicy failure_policy = FailurePolicy::kAbort;
  double snapshot_interval_s = 5.0;
  unsigned replan_limit = 3;
  std::uint64_t max_edges = 0;  // 0 = no cap
  Clock clock;                  // steady_clock() when empty
  std::function<void(const CoverageSnapshot&)> on_snapshot;
};

enum class RecordKind { kVertex, kEdge, kJump };

std::string_view to_string(RecordKind kind);

struct StepRecord {
  std::uint64_t seq = 0;  // contiguous from 1
  std::int64_t offset_us = 0;
  RecordKind kind = RecordKind::kVertex;
  Step step;  // landed vertex for kJump
  std::optional<Verdict> verdict;
  std::optional<std::string> fault_id;
  std::string context;  // digest after the step's actions

  bool operator==(const StepRecord&) const = default;
};

struct Failure {
  std::uint64_t seq = 0;
  std::string message;
  std::optional<std::string> fault_id;
};

enum class HaltReason {
  kStopFulfilled,
  kFailure,            // abort policy
  kDeadEnd,
  kPlanningExhausted,  // quick random has nothing left to plan for
  kUnreachable,        // A* target
  kReplanLimit,
  kGuardError,
  kEdgeLimit,          // RunConfig::max_edges
};

std::string_view to_string(HaltReason reason);

// True for halts that make the run unusable as a verdict (exit status 2).
bool is_error(HaltReason reason);

struct RunReport {
  std::vector<StepRecord> records;
  std::vector<CoverageSnapshot> snapshots;
  CoverageSnapshot final_coverage;
  Verdict verdict = Verdict::kPass;
  std::vector<Failure> failures;
  double wall_time_s = 0.0;
  HaltReason halt = HaltReason::kStopFulfilled;
  std::string halt_message;
  std::exception_ptr error;  // set for error halts and planning exhaustion

  // Edge and vertex steps in order; jumps left out.
  std::vector<Step> steps() const;
};

// Throws EngineError up front when the adapter lacks a binding for an
// element reachable from the entry, SpecError for a bad generator target or
// stop reference. Runtime problems end the run with an error HaltReason.
RunReport run_online(const Suite& suite, const GeneratorSpec& generator,
                     const StopCondition& stop, Adapter& adapter, const RunConfig& cfg);

// Runs the same loop against PassingAdapter. Error halts and planning
// exhaustion are rethrown.
std::vector<Step> generate_offline(const Suite& suite, const GeneratorSpec& generator,
                                   const StopCondition& stop, std::uint64_t seed);

// Moves to a uniformly chosen member of the current vertex's shared group
// (the current vertex included) and marks it visited. No-op for unlabelled
// vertices; singleton groups draw nothing from the PRNG.
std::size_t resolve_shared_jump(const Suite& suite, WalkState& state);

}  // namespace mbt

#endif  // MBT_ENGINE_HPP_
