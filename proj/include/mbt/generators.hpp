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

// Path generators: random walk, weighted random walk, quick random (walk a
// shortest path to a random unvisited edge, repeat) and A* (shortest path to
// a named element).
//
// Path planning runs over the jump-augmented graph: ordinary edges cost one
// hop and a shared-state vertex may move to any vertex with the same label
// at zero cost. Edge costs are unit, and A* uses the zero heuristic, so both
// planners reduce to breadth-first search with ties going to the route whose
// edges come first in declaration order.

#ifndef MBT_GENERATORS_HPP_
#define MBT_GENERATORS_HPP_

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbt/guard.hpp"
#include "mbt/model.hpp"
#include "mbt/rng.hpp"

namespace mbt {

enum class StepKind { kEdge, kVertex };

struct Step {
  StepKind kind = StepKind::kVertex;
  std::size_t index = 0;  // suite-wide vertex or edge index
  std::string model_id;
  std::string element_id;
  std::string name;

  bool operator==(const Step&) const = default;
};

Step vertex_step(const Suite& suite, std::size_t v);
Step edge_step(const Suite& suite, std::size_t e);

// Alternating edge/target-vertex steps. A shared-state jump between two
// steps is implicit: an edge may start at any vertex sharing the label of the
// preceding vertex step (or of the start position).
struct PlannedPath {
  std::vector<Step> steps;

  std::size_t edge_count() const { return steps.size() / 2; }
};

struct GeneratorSpec {
  enum class Kind { kRandom, kWeightedRandom, kQuickRandom, kAStar };

  Kind kind = Kind::kRandom;
  std::string target;  // "model/element", A* only

  bool operator==(const GeneratorSpec&) const = default;
};

// `random`, `weighted`, `quickrandom`, `astar:<model-id>/<element-id>`.
// Throws SpecError.
GeneratorSpec parse_generator_spec(std::string_view text);
std::string to_string(const GeneratorSpec& spec);

struct WalkState {
  std::size_t position = 0;
  guard::Context context;
  std::vector<bool> visited_edges;
  std::vector<bool> visited_vertices;
  SplitMix64 rng;
  std::deque<Step> plan;

  // Positioned at the suite entry with nothing visited.
  static WalkState start(const Suite& suite, std::uint64_t seed);
};

// Out-edges of the current vertex whose guard is absent or true, in
// declaration order. Guard errors are rethrown as EvalError naming the edge.
std::vector<std::size_t> enabled_out_edges(const Suite& suite, const WalkState& state);
std::vector<std::size_t> enabled_out_edges(const Suite& suite, std::size_t vertex,
                                           const guard::Context& ctx);

// Uniform choice among enabled out-edges. Throws DeadEndError.
Step next_step_random(const Suite& suite, WalkState& state);

// Choice proportional to edge weight (1.0 when unset), normalised over the
// enabled edges. Throws DeadEndError.
Step next_step_weighted(const Suite& suite, WalkState& state);

// Minimum-hop path from `from` to a vertex, or to and through an edge.
// Edges listed in `excluded` are not used. Throws UnreachableError.
PlannedPath shortest_path(const Suite& suite, std::size_t from, ElementRef to,
                          std::span<const std::size_t> excluded = {});

// Picks an unvisited edge uniformly among those reachable from the current
// position and returns the shortest path through it. Guards are ignored
// while planning. Throws PlanningExhaustedError.
PlannedPath plan_quick_random(const Suite& suite, WalkState& state,
                              std::span<const std::size_t> excluded = {});

PlannedPath plan_astar(const Suite& suite, const WalkState& state, ElementRef target,
                       std::span<const std::size_t> excluded = {});

}  // namespace mbt

#endif  // MBT_GENERATORS_HPP_
