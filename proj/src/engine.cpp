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

#include "mbt/engine.hpp"

#include <algorithm>
#include <chrono>

#include "mbt/error.hpp"

namespace mbt {

Clock steady_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::kVertex: return "vertex";
    case RecordKind::kEdge: return "edge";
    case RecordKind::kJump: return "jump";
  }
  return "?";
}

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::kStopFulfilled: return "stop condition fulfilled";
    case HaltReason::kFailure: return "aborted on failure";
    case HaltReason::kDeadEnd: return "dead end";
    case HaltReason::kPlanningExhausted: return "planning exhausted";
    case HaltReason::kUnreachable: return "target unreachable";
    case HaltReason::kReplanLimit: return "replan limit exceeded";
    case HaltReason::kGuardError: return "guard evaluation error";
    case HaltReason::kEdgeLimit: return "edge limit reached";
  }
  return "?";
}

bool is_error(HaltReason reason) {
  switch (reason) {
    case HaltReason::kDeadEnd:
    case HaltReason::kUnreachable:
    case HaltReason::kReplanLimit:
    case HaltReason::kGuardError:
      return true;
    default:
      return false;
  }
}

std::vector<Step> RunReport::steps() const {
  std::vector<Step> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.kind != RecordKind::kJump) out.push_back(r.step);
  }
  return out;
}

std::size_t resolve_shared_jump(const Suite& suite, WalkState& state) {
  auto peers = suite.shared_peers(state.position);
  if (peers.size() > 1) {
    state.position = peers[state.rng.below(peers.size())];
  }
  state.visited_vertices[state.position] = true;
  return state.position;
}

namespace {

class Runner {
 public:
  Runner(const Suite& suite, const GeneratorSpec& generator, const StopCondition& stop,
         Adapter& adapter, const RunConfig& cfg)
      : suite_(suite),
        generator_(generator),
        stop_(stop),
        adapter_(adapter),
        cfg_(cfg),
        clock_(cfg.clock ? cfg.clock : steady_clock()),
        state_(WalkState::start(suite, cfg.seed)),
        cov_(suite) {
    if (generator.kind == GeneratorSpec::Kind::kAStar) {
      try {
        astar_target_ = suite.resolve(generator.target);
      } catch (const ModelError& e) {
        throw SpecError("astar target: " + std::string(e.what()));
      }
    }
    check_stop_refs(stop, suite);
    check_bindings();
  }

  RunReport run() {
    start_us_ = clock_();
    try {
      for (const Model& m : suite_.models()) {
        state_.context = guard::apply_actions(m.init_stmts, state_.context);
      }
      if (arrive(state_.position)) {
        maybe_jump();
        report_.snapshots.push_back(snapshot());
        notify(report_.snapshots.back());
        loop();
      }
    } catch (const DeadEndError& e) {
      halt(HaltReason::kDeadEnd, e.what());
    } catch (const PlanningExhaustedError& e) {
      halt(HaltReason::kPlanningExhausted, e.what());
    } catch (const UnreachableError& e) {
      halt(HaltReason::kUnreachable, e.what());
    } catch (const ReplanLimitError& e) {
      halt(HaltReason::kReplanLimit, e.what());
    } catch (const EvalError& e) {
      halt(HaltReason::kGuardError, e.what());
    }
    finish();
    return std::move(report_);
  }

 private:
  void check_bindings() const {
    auto reachable = reachable_vertices(suite_, suite_.entry_vertex());
    auto require = [&](const std::string& name) {
      if (!adapter_.binds(name)) {
        throw EngineError("adapter has no binding for '" + name + "'");
      }
    };
    for (std::size_t v = 0; v < suite_.vertex_count(); ++v) {
      if (!reachable[v]) continue;
      require(suite_.vertex(v).name);
      for (std::size_t e : suite_.out_edges(v)) require(suite_.edge(e).name);
    }
  }

  std::int64_t now_us() const { return clock_() - start_us_; }

  std::int64_t last_offset() const {
    return report_.records.empty() ? 0 : report_.records.back().offset_us;
  }

  CoverageSnapshot snapshot() const { return cov_.snapshot(last_offset()); }

  void notify(const CoverageSnapshot& s) const {
    if (cfg_.on_snapshot) cfg_.on_snapshot(s);
  }

  StepRecord& record(RecordKind kind, Step step) {
    StepRecord& r = report_.records.emplace_back();
    r.seq = report_.records.size();
    r.offset_us = now_us();
    r.kind = kind;
    r.step = std::move(step);
    r.context = guard::context_digest(state_.context);
    return r;
  }

  void fail(std::uint64_t seq, std::string message, std::optional<std::string> fault) {
    report_.failures.push_back({seq, std::move(message), std::move(fault)});
  }

  // Called directly for normal halts and from catch handlers, where the
  // in-flight exception is kept for generate_offline to rethrow.
  void halt(HaltReason reason, std::string message) {
    report_.halt = reason;
    report_.halt_message = std::move(message);
    report_.error = std::current_exception();
  }

  // Verifies the vertex the walk just reached. Returns false when the run
  // must stop (abort policy).
  bool arrive(std::size_t v) {
    state_.position = v;
    state_.visited_vertices[v] = true;
    cov_.record_vertex(v);
    cov_.set_last_vertex(v);
    const Vertex& vx = suite_.vertex(v);
    auto outcome = adapter_.verify_vertex(vx.name, state_.context);
    StepRecord& r = record(RecordKind::kVertex, vertex_step(suite_, v));
    r.verdict = outcome.verdict;
    if (outcome.verdict == Verdict::kPass) return true;
    r.fault_id = outcome.fault_id;
    std::string message = outcome.message.empty() ? "verification " + vx.name + " failed"
                                                  : outcome.message;
    fail(r.seq, std::move(message), outcome.fault_id);
    if (cfg_.failure_policy == FailurePolicy::kAbort) {
      halt(HaltReason::kFailure, report_.failures.back().message);
      return false;
    }
    adapter_.recover(vx.name, state_.context);
    return true;
  }

  void jump_to(std::size_t v) {
    if (v == state_.position) return;
    state_.position = v;
    state_.visited_vertices[v] = true;
    cov_.record_vertex(v);
    record(RecordKind::kJump, vertex_step(suite_, v));
  }

  void maybe_jump() {
    if (!state_.plan.empty() || suite_.shared_peers(state_.position).size() < 2) return;
    std::size_t before = state_.position;
    std::size_t landed = resolve_shared_jump(suite_, state_);
    state_.position = before;
    jump_to(landed);
  }

  // Returns false when the run must stop.
  bool traverse(std::size_t e) {
    const Edge& edge = suite_.edge(e);
    auto outcome = adapter_.execute_edge(edge.name, state_.context);
    state_.context = guard::apply_actions(edge.action_stmts, state_.context);
    state_.visited_edges[e] = true;
    cov_.record_edge(e);
    cov_.set_last_edge(e);
    StepRecord& r = record(RecordKind::kEdge, edge_step(suite_, e));
    if (!outcome.ok) {
      r.verdict = Verdict::kFail;
      r.fault_id = outcome.fault_id;
      std::string message = outcome.message.empty() ? "action " + edge.name + " failed"
                                                    : outcome.message;
      fail(r.seq, std::move(message), outcome.fault_id);
      if (cfg_.failure_policy == FailurePolicy::kAbort) {
        halt(HaltReason::kFailure, report_.failures.back().message);
        return false;
      }
    }
    replans_ = 0;
    blocked_.clear();
    return arrive(suite_.edge_target(e));
  }

  void loop() {
    const std::int64_t interval_us =
        static_cast<std::int64_t>(cfg_.snapshot_interval_s * 1e6);
    std::int64_t last_snapshot_us = now_us();
    for (;;) {
      if (is_fulfilled(stop_, cov_, suite_, static_cast<double>(now_us()) / 1e6)) {
        halt(HaltReason::kStopFulfilled, {});
        return;
      }
      if (cfg_.max_edges != 0 && cov_.executed_edges() >= cfg_.max_edges) {
        halt(HaltReason::kEdgeLimit, {});
        return;
      }
      if (!traverse(next_edge())) return;
      maybe_jump();
      std::int64_t now = now_us();
      if (now - last_snapshot_us >= interval_us) {
        last_snapshot_us = now;
        report_.snapshots.push_back(snapshot());
        notify(report_.snapshots.back());
      }
    }
  }

  std::size_t next_edge() {
    switch (generator_.kind) {
      case GeneratorSpec::Kind::kRandom:
      case GeneratorSpec::Kind::kWeightedRandom:
        return walk_step();
      case GeneratorSpec::Kind::kQuickRandom:
      case GeneratorSpec::Kind::kAStar:
        return planned_step();
    }
    return walk_step();
  }

  // Random or weighted choice; a dead end on a shared vertex first jumps to
  // a group member that can move on.
  std::size_t walk_step() {
    if (enabled_out_edges(suite_, state_).empty()) {
      std::vector<std::size_t> exits;
      for (std::size_t p : suite_.shared_peers(state_.position)) {
        if (p != state_.position && !enabled_out_edges(suite_, p, state_.context).empty()) {
          exits.push_back(p);
        }
      }
      if (!exits.empty()) jump_to(exits[state_.rng.below(exits.size())]);
    }
    if (generator_.kind == GeneratorSpec::Kind::kWeightedRandom) {
      return next_step_weighted(suite_, state_).index;
    }
    return next_step_random(suite_, state_).index;
  }

  std::size_t planned_step() {
    const bool astar = generator_.kind == GeneratorSpec::Kind::kAStar;
    for (;;) {
      if (state_.plan.empty()) {
        // A* walks randomly once its target has been reached.
        if (astar && astar_planned_) return walk_step();
        PlannedPath path;
        try {
          path = astar ? plan_astar(suite_, state_, astar_target_, blocked_)
                       : plan_quick_random(suite_, state_, blocked_);
        } catch (const EngineError&) {
          // Everything left sits behind an edge blocked right here; wander.
          if (!blocked_.empty()) return walk_step();
          throw;
        }
        astar_planned_ = astar;
        state_.plan.assign(path.steps.begin(), path.steps.end());
        continue;
      }
      std::size_t e = state_.plan.front().index;
      std::size_t src = suite_.edge_source(e);
      if (src != state_.position) {
        auto peers = suite_.shared_peers(state_.position);
        if (std::find(peers.begin(), peers.end(), src) == peers.end()) {
          state_.plan.clear();
          continue;
        }
        jump_to(src);
      }
      const Edge& edge = suite_.edge(e);
      auto enabled = enabled_out_edges(suite_, state_);
      if (std::find(enabled.begin(), enabled.end(), e) == enabled.end()) {
        blocked_.push_back(e);
        state_.plan.clear();
        if (astar) astar_planned_ = false;
        if (++replans_ > cfg_.replan_limit) {
          throw ReplanLimitError("planned edge " + edge.name + " blocked by its guard; gave up after " +
                                 std::to_string(cfg_.replan_limit) + " replans");
        }
        continue;
      }
      state_.plan.pop_front();
      if (!state_.plan.empty()) state_.plan.pop_front();
      return e;
    }
  }

  void finish() {
    report_.final_coverage = snapshot();
    if (report_.snapshots.empty() || !(report_.snapshots.back() == report_.final_coverage)) {
      report_.snapshots.push_back(report_.final_coverage);
      notify(report_.final_coverage);
    }
    report_.verdict = report_.failures.empty() ? Verdict::kPass : Verdict::kFail;
    report_.wall_time_s = static_cast<double>(now_us()) / 1e6;
  }

  const Suite& suite_;
  const GeneratorSpec& generator_;
  const StopCondition& stop_;
  Adapter& adapter_;
  const RunConfig& cfg_;
  Clock clock_;
  std::int64_t start_us_ = 0;

  WalkState state_;
  CoverageState cov_;
  RunReport report_;

  ElementRef astar_target_;
  bool astar_planned_ = false;
  unsigned replans_ = 0;
  std::vector<std::size_t> blocked_;
};

}  // namespace

RunReport run_online(const Suite& suite, const GeneratorSpec& generator,
                     const StopCondition& stop, Adapter& adapter, const RunConfig& cfg) {
  return Runner(suite, generator, stop, adapter, cfg).run();
}

std::vector<Step> generate_offline(const Suite& suite, const GeneratorSpec& generator,
                                   const StopCondition& stop, std::uint64_t seed) {
  PassingAdapter adapter;
  RunConfig cfg;
  cfg.seed = seed;
  RunReport report = run_online(suite, generator, stop, adapter, cfg);
  if (report.error) std::rethrow_exception(report.error);
  return report.steps();
}

}  // namespace mbt
