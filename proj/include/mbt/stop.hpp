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

// Stop conditions decide when generation halts. Coverage conditions count
// distinct elements: an edge traversed five times still counts once.

#ifndef MBT_STOP_HPP_
#define MBT_STOP_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/generators.hpp"
#include "mbt/model.hpp"

namespace mbt {

struct StopCondition {
  enum class Kind {
    kEdgeCoverage,
    kVertexCoverage,
    kRequirementCoverage,
    kDependencyEdgeCoverage,
    kReachedVertex,
    kReachedEdge,
    kTimeDuration,
    kLength,
    kNever,
    kAll,
    kAny,
  };

  Kind kind = Kind::kNever;
  double value = 0.0;        // percent, dependency threshold or seconds
  std::uint64_t length = 0;  // kLength
  std::string ref;           // "model/element" for kReached*
  std::vector<StopCondition> children;

  static StopCondition edge_coverage(double pct);
  static StopCondition vertex_coverage(double pct);
  static StopCondition requirement_coverage(double pct);
  static StopCondition dependency_edge_coverage(double threshold);
  static StopCondition reached_vertex(std::string ref);
  static StopCondition reached_edge(std::string ref);
  static StopCondition time(double seconds);
  static StopCondition pairs(std::uint64_t count);
  static StopCondition never();
  static StopCondition all(std::vector<StopCondition> children);
  static StopCondition any(std::vector<StopCondition> children);

  bool operator==(const StopCondition&) const = default;
};

// Grammar: cond := name "(" arg ")" | cond "and" cond | cond "or" cond,
// with "and" binding tighter than "or"; parentheses group. Throws SpecError.
StopCondition parse_stop_spec(std::string_view text);
std::string to_string(const StopCondition& cond);

// Throws SpecError when a reached_* reference does not name an element of
// the right kind in `suite`.
void check_stop_refs(const StopCondition& cond, const Suite& suite);

// True when the condition (or a composite) contains a time_duration.
bool uses_time(const StopCondition& cond);

// Distinct-visit sets plus multiplicity counters for one run.
class CoverageState {
 public:
  explicit CoverageState(const Suite& suite);

  // Marks the element visited and counts one execution. Shared-jump
  // landings are recorded as vertex executions too.
  void record_vertex(std::size_t v);
  void record_edge(std::size_t e);
  // The most recent vertex step, and the edge of the most recent
  // edge-vertex pair. Shared-state jumps change neither.
  void set_last_vertex(std::size_t v) { last_vertex_ = v; }
  void set_last_edge(std::size_t e) { last_edge_ = e; }

  bool vertex_visited(std::size_t v) const { return vertices_[v]; }
  bool edge_visited(std::size_t e) const { return edges_[e]; }
  std::size_t vertices_covered() const { return vertices_covered_; }
  std::size_t edges_covered() const { return edges_covered_; }
  std::size_t requirements_covered() const { return requirements_covered_; }
  std::size_t models_reached() const { return models_reached_; }
  std::uint64_t executed_vertices() const { return executed_vertices_; }
  std::uint64_t executed_edges() const { return executed_edges_; }
  const std::optional<std::size_t>& last_vertex() const { return last_vertex_; }
  const std::optional<std::size_t>& last_edge() const { return last_edge_; }

  CoverageSnapshot snapshot(std::int64_t elapsed_us) const;

 private:
  const Suite* suite_;
  std::vector<bool> vertices_;
  std::vector<bool> edges_;
  std::vector<bool> requirements_;
  std::vector<bool> models_;
  std::size_t vertices_covered_ = 0;
  std::size_t edges_covered_ = 0;
  std::size_t requirements_covered_ = 0;
  std::size_t models_reached_ = 0;
  std::uint64_t executed_vertices_ = 0;
  std::uint64_t executed_edges_ = 0;
  std::optional<std::size_t> last_vertex_;
  std::optional<std::size_t> last_edge_;
};

bool is_fulfilled(const StopCondition& cond, const CoverageState& cov, const Suite& suite,
                  double elapsed_s);

}  // namespace mbt

#endif  // MBT_STOP_HPP_
