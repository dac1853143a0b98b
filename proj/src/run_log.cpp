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

#include "mbt/run_log.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <utility>

#include "mbt/error.hpp"

namespace mbt {

namespace {

void put_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string format_offset(std::int64_t us) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(us / 1000000),
                static_cast<long long>(us % 1000000));
  return buf;
}

std::string format_verdict(const StepRecord& r) {
  if (!r.verdict) return {};
  if (*r.verdict == Verdict::kPass) return "pass";
  return r.fault_id ? "fail:" + *r.fault_id : "fail";
}

[[noreturn]] void bad(std::size_t line, const std::string& message) {
  throw CoverageError("run log line " + std::to_string(line) + ": " + message);
}

// Splits one RFC-4180 document into records. Every record must be
// terminated by CRLF or LF.
std::vector<std::vector<std::string>> split_records(std::string_view doc) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < doc.size()) {
    char c = doc[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < doc.size() && doc[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        if (i < doc.size() && doc[i] != ',' && doc[i] != '\n' && doc[i] != '\r') {
          bad(line, "text after closing quote");
        }
        continue;
      }
      if (c == '\n') ++line;
      field += c;
      ++i;
      continue;
    }
    if (c == '"') {
      if (field_started) bad(line, "quote inside unquoted field");
      quoted = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      ++i;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r') {
        if (i + 1 >= doc.size() || doc[i + 1] != '\n') bad(line, "bare carriage return");
        ++i;
      }
      ++i;
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      rows.push_back(std::move(row));
      row.clear();
      ++line;
    } else {
      field += c;
      field_started = true;
      ++i;
    }
  }
  if (quoted) bad(line, "unterminated quoted field");
  if (field_started || !row.empty()) bad(line, "last row is not newline-terminated");
  return rows;
}

std::int64_t parse_offset(std::string_view text, std::size_t line) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || text.size() - dot - 1 != 6) {
    bad(line, "offset_s must look like S.UUUUUU");
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  auto whole_text = text.substr(0, dot);
  auto frac_text = text.substr(dot + 1);
  auto digits = [](std::string_view t) {
    return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!digits(whole_text) || !digits(frac_text)) {
    bad(line, "bad offset_s '" + std::string(text) + "'");
  }
  auto r1 = std::from_chars(whole_text.data(), whole_text.data() + whole_text.size(), whole);
  auto r2 = std::from_chars(frac_text.data(), frac_text.data() + frac_text.size(), frac);
  if (whole_text.empty() || r1.ec != std::errc() ||
      r1.ptr != whole_text.data() + whole_text.size() || r2.ec != std::errc() ||
      r2.ptr != frac_text.data() + frac_text.size() || whole < 0 || frac < 0) {
    bad(line, "bad offset_s '" + std::string(text) + "'");
  }
  return whole * 1000000 + frac;
}

}  // namespace

std::string export_run_log(const RunReport& report) { return export_run_log(report.records); }

std::string export_run_log(std::span<const StepRecord> records) {
  std::string out(kRunLogHeader);
  out += '\n';
  for (const StepRecord& r : records) {
    out += std::to_string(r.seq);
    out += ',';
    out += format_offset(r.offset_us);
    out += ',';
    out += to_string(r.kind);
    out += ',';
    put_field(out, r.step.model_id);
    out += ',';
    put_field(out, r.step.element_id);
    out += ',';
    put_field(out, r.step.name);
    out += ',';
    put_field(out, format_verdict(r));
    out += ',';
    put_field(out, r.context);
    out += '\n';
  }
  return out;
}

std::vector<StepRecord> parse_run_log(std::string_view document) {
  auto rows = split_records(document);
  if (rows.empty()) throw CoverageError("run log is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (i) header += ',';
    header += rows[0][i];
  }
  if (header != kRunLogHeader) bad(1, "unexpected header '" + header + "'");

  std::vector<StepRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::size_t line = i + 1;
    if (row.size() != 8) {
      bad(line, "expected 8 fields, found " + std::to_string(row.size()));
    }
    StepRecord r;
    auto [ptr, ec] = std::from_chars(row[0].data(), row[0].data() + row[0].size(), r.seq);
    if (ec != std::errc() || ptr != row[0].data() + row[0].size()) {
      bad(line, "bad seq '" + row[0] + "'");
    }
    if (r.seq != records.size() + 1) bad(line, "seq is not contiguous");
    r.offset_us = parse_offset(row[1], line);
    if (!records.empty() && r.offset_us < records.back().offset_us) {
      bad(line, "offset_s goes backwards");
    }
    if (row[2] == "vertex") {
      r.kind = RecordKind::kVertex;
      r.step.kind = StepKind::kVertex;
    } else if (row[2] == "edge") {
      r.kind = RecordKind::kEdge;
      r.step.kind = StepKind::kEdge;
    } else if (row[2] == "jump") {
      r.kind = RecordKind::kJump;
      r.step.kind = StepKind::kVertex;
    } else {
      bad(line, "unknown kind '" + row[2] + "'");
    }
    r.step.model_id = row[3];
    r.step.element_id = row[4];
    r.step.name = row[5];
    const std::string& verdict = row[6];
    if (verdict == "pass") {
      r.verdict = Verdict::kPass;
    } else if (verdict == "fail") {
      r.verdict = Verdict::kFail;
    } else if (verdict.starts_with("fail:") && verdict.size() > 5) {
      r.verdict = Verdict::kFail;
      r.fault_id = verdict.substr(5);
    } else if (!verdict.empty()) {
      bad(line, "unknown verdict '" + verdict + "'");
    }
    if (r.kind == RecordKind::kVertex && !r.verdict) bad(line, "vertex row without verdict");
    if (r.kind == RecordKind::kJump && r.verdict) bad(line, "jump row with a verdict");
    r.context = row[7];
    records.push_back(std::move(r));
  }
  return records;
}

CoverageSnapshot fold(const Suite& suite, std::span<const StepRecord> records) {
  std::set<std::pair<std::string, std::string>> vertices;
  std::set<std::pair<std::string, std::string>> edges;
  std::set<std::string> models;
  std::set<std::string> requirements;
  CoverageSnapshot s;
  for (const StepRecord& r : records) {
    const std::string& m = r.step.model_id;
    const std::string& id = r.step.element_id;
    if (r.kind == RecordKind::kEdge) {
      if (!suite.find_edge(m, id)) {
        throw CoverageError("run log names unknown edge " + m + "/" + id);
      }
      ++s.edges_executed;
      edges.emplace(m, id);
      continue;
    }
    auto v = suite.find_vertex(m, id);
    if (!v) throw CoverageError("run log names unknown vertex " + m + "/" + id);
    ++s.vertices_executed;
    vertices.emplace(m, id);
    models.insert(m);
    for (const std::string& tag : suite.vertex(*v).requirements) requirements.insert(tag);
  }
  s.models_reached = models.size();
  s.models_total = suite.models().size();
  s.vertices_covered = vertices.size();
  s.vertices_total = suite.vertex_count();
  s.edges_covered = edges.size();
  s.edges_total = suite.edge_count();
  s.requirements_covered = requirements.size();
  s.requirements_total = suite.requirements_universe().size();
  s.elapsed_us = records.empty() ? 0 : records.back().offset_us;
  return s;
}

}  // namespace mbt
