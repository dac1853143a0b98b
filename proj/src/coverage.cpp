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

#include "mbt/coverage.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mbt/error.hpp"

namespace mbt {

using ojson = nlohmann::ordered_json;

std::string format_ratio(std::uint64_t covered, std::uint64_t total) {
  std::uint64_t hundredths = 0;
  if (total != 0) hundredths = (covered * 20000 + total) / (2 * total);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%llu/%llu = %llu.%02llu%%",
                static_cast<unsigned long long>(covered),
                static_cast<unsigned long long>(total),
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

std::string format_elapsed(std::int64_t seconds) {
  if (seconds < 0) seconds = 0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld",
                static_cast<long long>(seconds / 3600),
                static_cast<long long>(seconds / 60 % 60),
                static_cast<long long>(seconds % 60));
  return buf;
}

std::string format_stats(const CoverageSnapshot& s) {
  std::ostringstream out;
  out << "# of test models reached so far: " << format_ratio(s.models_reached, s.models_total)
      << "\n"
      << "# of nodes covered so far: " << format_ratio(s.vertices_covered, s.vertices_total)
      << "\n"
      << "# of nodes executed so far: " << s.vertices_executed << "\n"
      << "# of edges covered so far: " << format_ratio(s.edges_covered, s.edges_total) << "\n"
      << "# of edges executed so far: " << s.edges_executed << "\n"
      << "# of requirements covered so far: "
      << format_ratio(s.requirements_covered, s.requirements_total) << "\n"
      << "Time elapsed in MBT: " << format_elapsed(s.elapsed_us / 1000000) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

std::string_view to_string(Scope scope) {
  return scope == Scope::kClient ? "client" : "server";
}

void check_event(const CodeCoverageEvent& event) {
  if (event.source_id.empty()) throw CoverageError("coverage event has an empty source id");
  if (event.total_lines == 0) {
    throw CoverageError("source '" + event.source_id + "' has no lines");
  }
  if ((event.scope == Scope::kClient) != event.page_id.has_value()) {
    throw CoverageError("source '" + event.source_id +
                        "': page is required for client events and forbidden for server events");
  }
  for (std::size_t i = 0; i < event.covered_lines.size(); ++i) {
    std::uint32_t line = event.covered_lines[i];
    if (line < 1 || line > event.total_lines) {
      throw CoverageError("source '" + event.source_id + "': line " + std::to_string(line) +
                          " outside [1, " + std::to_string(event.total_lines) + "]");
    }
    if (i > 0 && event.covered_lines[i - 1] >= line) {
      throw CoverageError("source '" + event.source_id +
                          "': covered lines must be strictly increasing");
    }
  }
}

std::string to_ndjson(const CodeCoverageEvent& event) {
  ojson j;
  j["t"] = event.timestamp_s;
  j["scope"] = to_string(event.scope);
  j["source"] = event.source_id;
  if (event.page_id) j["page"] = *event.page_id;
  j["total"] = event.total_lines;
  j["covered"] = event.covered_lines;
  return j.dump() + "\n";
}

namespace {

template <typename Fn>
void for_each_line(std::string_view document, Fn&& fn) {
  std::size_t lineno = 0;
  while (!document.empty()) {
    auto nl = document.find('\n');
    auto line = document.substr(0, nl);
    document = nl == std::string_view::npos ? std::string_view{} : document.substr(nl + 1);
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::parse_error& e) {
      throw CoverageError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) throw CoverageError("line " + std::to_string(lineno) + ": not an object");
    fn(j, lineno);
  }
}

}  // namespace

std::vector<CodeCoverageEvent> parse_event_stream(std::string_view document) {
  std::vector<CodeCoverageEvent> out;
  for_each_line(document, [&](const ojson& j, std::size_t lineno) {
    auto where = "line " + std::to_string(lineno) + ": ";
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const std::set<std::string> kKeys{"t", "scope", "source", "page", "total", "covered"};
      if (!kKeys.count(it.key())) throw CoverageError(where + "unknown key \"" + it.key() + "\"");
    }
    try {
      CodeCoverageEvent ev;
      ev.timestamp_s = j.at("t").get<double>();
      auto scope = j.at("scope").get<std::string>();
      if (scope == "client") {
        ev.scope = Scope::kClient;
      } else if (scope == "server") {
        ev.scope = Scope::kServer;
      } else {
        throw CoverageError(where + "scope must be client or server");
      }
      ev.source_id = j.at("source").get<std::string>();
      if (j.contains("page")) ev.page_id = j["page"].get<std::string>();
      ev.total_lines = j.at("total").get<std::uint32_t>();
      ev.covered_lines = j.at("covered").get<std::vector<std::uint32_t>>();
      std::sort(ev.covered_lines.begin(), ev.covered_lines.end());
      ev.covered_lines.erase(std::unique(ev.covered_lines.begin(), ev.covered_lines.end()),
                             ev.covered_lines.end());
      check_event(ev);
      out.push_back(std::move(ev));
    } catch (const ojson::exception& e) {
      throw CoverageError(where + e.what());
    } catch (const CoverageError& e) {
      throw CoverageError(where + e.what());
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

void CoverageStore::enter_page(const std::string& page_id) {
  pages_[page_id].clear();
  current_page_ = page_id;
}

void CoverageStore::ingest(const CodeCoverageEvent& event) {
  check_event(event);
  SourceKey key{event.scope, event.source_id};
  auto it = sources_.find(key);
  if (it != sources_.end() && it->second.total != event.total_lines) {
    throw CoverageError("source '" + event.source_id + "' reported " +
                        std::to_string(event.total_lines) + " lines, previously " +
                        std::to_string(it->second.total));
  }
  Source& src = sources_[key];
  src.total = event.total_lines;
  src.covered.insert(event.covered_lines.begin(), event.covered_lines.end());

  if (event.scope == Scope::kClient) {
    if (current_page_ != event.page_id) enter_page(*event.page_id);
    Source& local = pages_[*event.page_id][event.source_id];
    local.total = event.total_lines;
    local.covered.insert(event.covered_lines.begin(), event.covered_lines.end());
  }
}

namespace {

template <typename Range>
double ratio_pct(const Range& sources) {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  for (const auto& src : sources) {
    covered += src.covered.size();
    total += src.total;
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

}  // namespace

double CoverageStore::cumulative_pct(Scope scope) const {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  for (const auto& [key, src] : sources_) {
    if (key.first != scope) continue;
    covered += src.covered.size();
    total += src.total;
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

double CoverageStore::per_page_pct(std::string_view page_id) const {
  auto it = pages_.find(page_id);
  if (it == pages_.end()) {
    throw CoverageError("page '" + std::string(page_id) + "' was never current");
  }
  std::vector<Source> sources;
  for (const auto& [id, src] : it->second) sources.push_back(src);
  return ratio_pct(sources);
}

std::size_t CoverageStore::source_count(Scope scope) const {
  return static_cast<std::size_t>(std::count_if(
      sources_.begin(), sources_.end(), [&](const auto& kv) { return kv.first.first == scope; }));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Series series) {
  switch (series) {
    case Series::kCumulativeClient: return "cumulative_client";
    case Series::kCurrentPageClient: return "current_page_client";
    case Series::kCumulativeServer: return "cumulative_server";
    case Series::kModelEdgePct: return "model_edge_pct";
    case Series::kModelVertexPct: return "model_vertex_pct";
  }
  return "?";
}

std::string emit_series(std::span<const TimeSeriesPoint> points) {
  std::map<Series, double> last;
  std::string out;
  for (const auto& p : points) {
    auto it = last.find(p.series);
    if (it != last.end() && p.timestamp_s < it->second) {
      throw CoverageError("series " + std::string(to_string(p.series)) +
                          " goes back in time at t=" + std::to_string(p.timestamp_s));
    }
    if (!(p.value >= 0.0 && p.value <= 100.0)) {
      throw CoverageError("series value outside [0, 100]");
    }
    last[p.series] = p.timestamp_s;
    ojson j;
    j["t"] = p.timestamp_s;
    j["series"] = to_string(p.series);
    j["value"] = p.value;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TimeSeriesPoint> parse_series(std::string_view document) {
  static const std::map<std::string, Series, std::less<>> kNames{
      {"cumulative_client", Series::kCumulativeClient},
      {"current_page_client", Series::kCurrentPageClient},
      {"cumulative_server", Series::kCumulativeServer},
      {"model_edge_pct", Series::kModelEdgePct},
      {"model_vertex_pct", Series::kModelVertexPct},
  };
  std::vector<TimeSeriesPoint> out;
  for_each_line(document, [&](const ojson& j, std::size_t lineno) {
    try {
      auto name = j.at("series").get<std::string>();
      auto it = kNames.find(name);
      if (it == kNames.end()) throw CoverageError("unknown series '" + name + "'");
      out.push_back({j.at("t").get<double>(), it->second, j.at("value").get<double>()});
    } catch (const ojson::exception& e) {
      throw CoverageError("line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace mbt
