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

// Live statistics: model-coverage snapshots and their text rendering, plus
// line-coverage aggregation for client (per page) and server sources.

#ifndef MBT_COVERAGE_HPP_
#define MBT_COVERAGE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbt {

// Point-in-time model coverage. `elapsed_us` is wall-clock and the only
// field that is not a pure function of the step sequence.
struct CoverageSnapshot {
  std::size_t models_reached = 0;
  std::size_t models_total = 0;
  std::size_t vertices_covered = 0;
  std::size_t vertices_total = 0;
  std::uint64_t vertices_executed = 0;
  std::size_t edges_covered = 0;
  std::size_t edges_total = 0;
  std::uint64_t edges_executed = 0;
  std::size_t requirements_covered = 0;
  std::size_t requirements_total = 0;
  std::int64_t elapsed_us = 0;

  bool operator==(const CoverageSnapshot&) const = default;
};

// "42/170 = 24.71%", percentage rounded half-up to two decimals. 0/0 renders
// as 0.00%.
std::string format_ratio(std::uint64_t covered, std::uint64_t total);

// Whole seconds as HH:MM:SS (hours may exceed 99).
std::string format_elapsed(std::int64_t seconds);

// One statistic per line, newline-terminated.
std::string format_stats(const CoverageSnapshot& snapshot);

// ---------------------------------------------------------------------------
// Code coverage

enum class Scope { kClient, kServer };

std::string_view to_string(Scope scope);

struct CodeCoverageEvent {
  double timestamp_s = 0.0;
  Scope scope = Scope::kClient;
  std::string source_id;
  std::optional<std::string> page_id;  // client only
  std::uint32_t total_lines = 0;
  std::vector<std::uint32_t> covered_lines;  // sorted, unique, in [1, total]

  bool operator==(const CodeCoverageEvent&) const = default;
};

// Throws CoverageError when an invariant of the event does not hold.
void check_event(const CodeCoverageEvent& event);

// NDJSON event stream with keys t, scope, source, page, total, covered.
std::string to_ndjson(const CodeCoverageEvent& event);
std::vector<CodeCoverageEvent> parse_event_stream(std::string_view document);

// Running unions of covered lines per source, cumulative per scope and
// page-local since the page last became current.
class CoverageStore {
 public:
  // Makes `page_id` current and clears its page-local state.
  void enter_page(const std::string& page_id);

  // Unions the event's lines into its source. A client event for a page
  // other than the current one enters that page first. Throws CoverageError
  // on a total_lines conflict or a malformed event.
  void ingest(const CodeCoverageEvent& event);

  double cumulative_pct(Scope scope) const;

  // Throws CoverageError for a page that never became current.
  double per_page_pct(std::string_view page_id) const;

  const std::optional<std::string>& current_page() const { return current_page_; }

  std::size_t source_count(Scope scope) const;

  bool operator==(const CoverageStore&) const = default;

 private:
  struct Source {
    std::uint32_t total = 0;
    std::set<std::uint32_t> covered;

    bool operator==(const Source&) const = default;
  };
  using SourceKey = std::pair<Scope, std::string>;

  std::map<SourceKey, Source> sources_;
  // Page-local unions keyed by client source id.
  std::map<std::string, std::map<std::string, Source>, std::less<>> pages_;
  std::optional<std::string> current_page_;
};

// ---------------------------------------------------------------------------
// Time series

enum class Series {
  kCumulativeClient,
  kCurrentPageClient,
  kCumulativeServer,
  kModelEdgePct,
  kModelVertexPct,
};

std::string_view to_string(Series series);

struct TimeSeriesPoint {
  double timestamp_s = 0.0;
  Series series = Series::kModelEdgePct;
  double value = 0.0;

  bool operator==(const TimeSeriesPoint&) const = default;
};

// One `{"t":…,"series":…,"value":…}` object per line. Throws CoverageError
// when a series goes back in time or a value leaves [0, 100].
std::string emit_series(std::span<const TimeSeriesPoint> points);
std::vector<TimeSeriesPoint> parse_series(std::string_view document);

}  // namespace mbt

#endif  // MBT_COVERAGE_HPP_
