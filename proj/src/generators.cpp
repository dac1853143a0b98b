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

#include "mbt/generators.hpp"

#include <algorithm>
#include <limits>

#include "mbt/error.hpp"

namespace mbt {

Step vertex_step(const Suite& suite, std::size_t v) {
  const Vertex& vx = suite.vertex(v);
  return {StepKind::kVertex, v, suite.models()[suite.vertex_model(v)].id, vx.id, vx.name};
}

Step edge_step(const Suite& suite, std::size_t e) {
  const Edge& ex = suite.edge(e);
  return {StepKind::kEdge, e, suite.models()[suite.edge_model(e)].id, ex.id, ex.name};
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  if (text == "random") return {GeneratorSpec::Kind::kRandom, {}};
  if (text == "weighted") return {GeneratorSpec::Kind::kWeightedRandom, {}};
  if (text == "quickrandom") return {GeneratorSpec::Kind::kQuickRandom, {}};
  constexpr std::string_view kAStar = "astar:";
  if (text.starts_with(kAStar)) {
    auto target = text.substr(kAStar.size());
    auto slash = target.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 == target.size()) {
      throw SpecError("astar target must be '<model-id>/<element-id>'");
    }
    return {GeneratorSpec::Kind::kAStar, std::string(target)};
  }
  throw SpecError("unknown generator '" + std::string(text) +
                  "' (expected random, weighted, quickrandom or astar:<model>/<element>)");
}

std::string to_string(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::kRandom: return "random";
    case GeneratorSpec::Kind::kWeightedRandom: return "weighted";
    case GeneratorSpec::Kind::kQuickRandom: return "quickrandom";
    case GeneratorSpec::Kind::kAStar: return "astar:" + spec.target;
  }
  return "?";
}

WalkState WalkState::start(const Suite& suite, std::uint64_t seed) {
  WalkState s;
  s.position = suite.entry_vertex();
  s.visited_edges.assign(suite.edge_count(), false);
  s.visited_vertices.assign(suite.vertex_count(), false);
  s.rng = SplitMix64(seed);
  return s;
}

std::vector<std::size_t> enabled_out_edges(const Suite& suite, const WalkState& state) {
  return enabled_out_edges(suite, state.position, state.context);
}

std::vector<std::size_t> enabled_out_edges(const Suite& suite, std::size_t vertex,
                                           const guard::Context& ctx) {
  std::vector<std::size_t> out;
  for (std::size_t e : suite.out_edges(vertex)) {
    const Edge& edge = suite.edge(e);
    if (edge.guard_expr) {
      try {
        if (!guard::eval_guard(*edge.guard_expr, ctx)) continue;
      } catch (const EvalError& err) {
        throw EvalError(err.kind(), suite.models()[suite.edge_model(e)].id + "/" + edge.id +
                                        ": " + err.what());
      }
    }
    out.push_back(e);
  }
  return out;
}

namespace {

[[noreturn]] void dead_end(const Suite& suite, std::size_t v) {
  const Vertex& vx = suite.vertex(v);
  throw DeadEndError("dead end at " + suite.models()[suite.vertex_model(v)].id + "/" + vx.id +
                     " (" + vx.name + "): no enabled out-edge");
}

struct Predecessor {
  enum class Kind { kNone, kEdge, kJump } kind = Kind::kNone;
  std::size_t from = 0;  // edge index for kEdge, vertex for kJump
};

// Breadth-first search over the jump-augmented graph. Jump-reached vertices
// are discovered at the same depth as the vertex they jump from.
class HopSearch {
 public:
  static constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

  HopSearch(const Suite& suite, std::size_t from, std::span<const std::size_t> excluded)
      : suite_(suite),
        dist_(suite.vertex_count(), kUnseen),
        pred_(suite.vertex_count()),
        excluded_(suite.edge_count(), false) {
    for (std::size_t e : excluded) excluded_[e] = true;
    std::vector<std::size_t> queue;
    queue.reserve(suite.vertex_count());
    auto discover = [&](std::size_t v, std::size_t d, Predecessor p) {
      dist_[v] = d;
      pred_[v] = p;
      queue.push_back(v);
      for (std::size_t peer : suite.shared_peers(v)) {
        if (dist_[peer] != kUnseen) continue;
        dist_[peer] = d;
        pred_[peer] = {Predecessor::Kind::kJump, v};
        queue.push_back(peer);
      }
    };
    discover(from, 0, {});
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t u = queue[head];
      for (std::size_t e : suite.out_edges(u)) {
        if (excluded_[e]) continue;
        std::size_t t = suite.edge_target(e);
        if (dist_[t] == kUnseen) discover(t, dist_[u] + 1, {Predecessor::Kind::kEdge, e});
      }
    }
  }

  bool reached(std::size_t v) const { return dist_[v] != kUnseen; }
  bool usable(std::size_t e) const { return !excluded_[e] && reached(suite_.edge_source(e)); }

  // Edge sequence leading to `v`, in walk order.
  std::vector<std::size_t> edges_to(std::size_t v) const {
    std::vector<std::size_t> rev;
    for (;;) {
      const Predecessor& p = pred_[v];
      if (p.kind == Predecessor::Kind::kNone) break;
      if (p.kind == Predecessor::Kind::kJump) {
        v = p.from;
      } else {
        rev.push_back(p.from);
        v = suite_.edge_source(p.from);
      }
    }
    return {rev.rbegin(), rev.rend()};
  }

  PlannedPath path_through(std::vector<std::size_t> edges) const {
    PlannedPath path;
    for (std::size_t e : edges) {
      path.steps.push_back(edge_step(suite_, e));
      path.steps.push_back(vertex_step(suite_, suite_.edge_target(e)));
    }
    return path;
  }

 private:
  const Suite& suite_;
  std::vector<std::size_t> dist_;
  std::vector<Predecessor> pred_;
  std::vector<bool> excluded_;
};

}  // namespace

Step next_step_random(const Suite& suite, WalkState& state) {
  auto enabled = enabled_out_edges(suite, state);
  if (enabled.empty()) dead_end(suite, state.position);
  return edge_step(suite, enabled[state.rng.below(enabled.size())]);
}

Step next_step_weighted(const Suite& suite, WalkState& state) {
  auto enabled = enabled_out_edges(suite, state);
  if (enabled.empty()) dead_end(suite, state.position);
  double total = 0.0;
  for (std::size_t e : enabled) total += suite.edge(e).weight.value_or(1.0);
  double draw = state.rng.unit() * total;
  for (std::size_t e : enabled) {
    draw -= suite.edge(e).weight.value_or(1.0);
    if (draw < 0.0) return edge_step(suite, e);
  }
  return edge_step(suite, enabled.back());
}

PlannedPath shortest_path(const Suite& suite, std::size_t from, ElementRef to,
                          std::span<const std::size_t> excluded) {
  HopSearch search(suite, from, excluded);
  if (to.kind == ElementKind::kVertex) {
    if (!search.reached(to.index)) {
      throw UnreachableError("target " + suite.model_id_of(to) + "/" +
                             suite.element_id_of(to) + " is unreachable");
    }
    return search.path_through(search.edges_to(to.index));
  }
  if (!search.usable(to.index)) {
    throw UnreachableError("target " + suite.model_id_of(to) + "/" +
                           suite.element_id_of(to) + " is unreachable");
  }
  auto edges = search.edges_to(suite.edge_source(to.index));
  edges.push_back(to.index);
  return search.path_through(std::move(edges));
}

PlannedPath plan_quick_random(const Suite& suite, WalkState& state,
                              std::span<const std::size_t> excluded) {
  HopSearch search(suite, state.position, excluded);
  std::vector<std::size_t> candidates;
  for (std::size_t e = 0; e < suite.edge_count(); ++e) {
    if (!state.visited_edges[e] && search.usable(e)) candidates.push_back(e);
  }
  if (candidates.empty()) {
    throw PlanningExhaustedError("no reachable unvisited edge left to plan for");
  }
  std::size_t chosen = candidates[state.rng.below(candidates.size())];
  auto edges = search.edges_to(suite.edge_source(chosen));
  edges.push_back(chosen);
  return search.path_through(std::move(edges));
}

PlannedPath plan_astar(const Suite& suite, const WalkState& state, ElementRef target,
                       std::span<const std::size_t> excluded) {
  return shortest_path(suite, state.position, target, excluded);
}

}  // namespace mbt
