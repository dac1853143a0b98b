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

#include "mbt/stop.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "mbt/error.hpp"

namespace mbt {

using Kind = StopCondition::Kind;

namespace {

StopCondition make(Kind kind, double value = 0.0, std::uint64_t length = 0,
                   std::string ref = {}, std::vector<StopCondition> children = {}) {
  StopCondition c;
  c.kind = kind;
  c.value = value;
  c.length = length;
  c.ref = std::move(ref);
  c.children = std::move(children);
  return c;
}

}  // namespace

StopCondition StopCondition::edge_coverage(double pct) { return make(Kind::kEdgeCoverage, pct); }
StopCondition StopCondition::vertex_coverage(double pct) {
  return make(Kind::kVertexCoverage, pct);
}
StopCondition StopCondition::requirement_coverage(double pct) {
  return make(Kind::kRequirementCoverage, pct);
}
StopCondition StopCondition::dependency_edge_coverage(double threshold) {
  return make(Kind::kDependencyEdgeCoverage, threshold);
}
StopCondition StopCondition::reached_vertex(std::string ref) {
  return make(Kind::kReachedVertex, 0.0, 0, std::move(ref));
}
StopCondition StopCondition::reached_edge(std::string ref) {
  return make(Kind::kReachedEdge, 0.0, 0, std::move(ref));
}
StopCondition StopCondition::time(double seconds) { return make(Kind::kTimeDuration, seconds); }
StopCondition StopCondition::pairs(std::uint64_t count) { return make(Kind::kLength, 0.0, count); }
StopCondition StopCondition::never() { return make(Kind::kNever); }
StopCondition StopCondition::all(std::vector<StopCondition> children) {
  return make(Kind::kAll, 0.0, 0, {}, std::move(children));
}
StopCondition StopCondition::any(std::vector<StopCondition> children) {
  return make(Kind::kAny, 0.0, 0, {}, std::move(children));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class StopParser {
 public:
  explicit StopParser(std::string_view src) : src_(src) {}

  StopCondition parse() {
    auto cond = parse_or();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(src_.substr(pos_)) + "'");
    return cond;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SpecError("stop condition: " + msg + " (at position " + std::to_string(pos_) + ")");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    return src_.substr(start, pos_ - start);
  }

  bool keyword(std::string_view kw) {
    std::size_t save = pos_;
    if (word() == kw) return true;
    pos_ = save;
    return false;
  }

  StopCondition parse_or() {
    std::vector<StopCondition> parts{parse_and()};
    while (keyword("or")) parts.push_back(parse_and());
    return parts.size() == 1 ? std::move(parts.front()) : StopCondition::any(std::move(parts));
  }

  StopCondition parse_and() {
    std::vector<StopCondition> parts{parse_primary()};
    while (keyword("and")) parts.push_back(parse_primary());
    return parts.size() == 1 ? std::move(parts.front()) : StopCondition::all(std::move(parts));
  }

  StopCondition parse_primary() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      ++pos_;
      auto inner = parse_or();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    std::size_t name_pos = pos_;
    std::string name(word());
    if (name.empty()) fail("expected a condition name");
    skip_ws();
    std::string arg;
    bool has_parens = pos_ < src_.size() && src_[pos_] == '(';
    if (has_parens) {
      auto close = src_.find(')', pos_);
      if (close == std::string_view::npos) fail("missing ')' after " + name);
      arg = trim(src_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
    } else if (name != "never") {
      pos_ = name_pos;
      fail("expected '(' after " + name);
    }
    return make(name, arg);
  }

  static std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
  }

  double number(const std::string& name, const std::string& arg) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc{} || p != arg.data() + arg.size() || !std::isfinite(v)) {
      fail(name + " expects a number, got '" + arg + "'");
    }
    return v;
  }

  double percent(const std::string& name, const std::string& arg) const {
    double v = number(name, arg);
    if (v < 0.0 || v > 100.0) fail(name + " parameter " + arg + " is out of range [0, 100]");
    return v;
  }

  std::string reference(const std::string& name, const std::string& arg) const {
    auto slash = arg.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == arg.size()) {
      fail(name + " expects '<model-id>/<element-id>', got '" + arg + "'");
    }
    return arg;
  }

  StopCondition make(const std::string& name, const std::string& arg) const {
    if (name == "edge_coverage") return StopCondition::edge_coverage(percent(name, arg));
    if (name == "vertex_coverage") return StopCondition::vertex_coverage(percent(name, arg));
    if (name == "requirement_coverage") {
      return StopCondition::requirement_coverage(percent(name, arg));
    }
    if (name == "dependency_edge_coverage") {
      return StopCondition::dependency_edge_coverage(percent(name, arg));
    }
    if (name == "reached_vertex") return StopCondition::reached_vertex(reference(name, arg));
    if (name == "reached_edge") return StopCondition::reached_edge(reference(name, arg));
    if (name == "time") {
      double s = number(name, arg);
      if (!(s > 0.0)) fail("time must be positive, got '" + arg + "'");
      return StopCondition::time(s);
    }
    if (name == "length") {
      std::uint64_t n = 0;
      auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
      if (arg.empty() || ec != std::errc{} || p != arg.data() + arg.size()) {
        fail("length expects a non-negative integer, got '" + arg + "'");
      }
      return StopCondition::pairs(n);
    }
    if (name == "never") {
      if (!arg.empty()) fail("never takes no argument");
      return StopCondition::never();
    }
    fail("unknown condition '" + name + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string number_text(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

StopCondition parse_stop_spec(std::string_view text) { return StopParser(text).parse(); }

std::string to_string(const StopCondition& c) {
  switch (c.kind) {
    case Kind::kEdgeCoverage: return "edge_coverage(" + number_text(c.value) + ")";
    case Kind::kVertexCoverage: return "vertex_coverage(" + number_text(c.value) + ")";
    case Kind::kRequirementCoverage: return "requirement_coverage(" + number_text(c.value) + ")";
    case Kind::kDependencyEdgeCoverage:
      return "dependency_edge_coverage(" + number_text(c.value) + ")";
    case Kind::kReachedVertex: return "reached_vertex(" + c.ref + ")";
    case Kind::kReachedEdge: return "reached_edge(" + c.ref + ")";
    case Kind::kTimeDuration: return "time(" + number_text(c.value) + ")";
    case Kind::kLength: return "length(" + std::to_string(c.length) + ")";
    case Kind::kNever: return "never()";
    case Kind::kAll:
    case Kind::kAny: {
      std::string out = "(";
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i) out += c.kind == Kind::kAll ? " and " : " or ";
        out += to_string(c.children[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

void check_stop_refs(const StopCondition& cond, const Suite& suite) {
  for (const auto& child : cond.children) check_stop_refs(child, suite);
  if (cond.kind != Kind::kReachedVertex && cond.kind != Kind::kReachedEdge) return;
  auto slash = cond.ref.find('/');
  auto found = suite.find_element(std::string_view(cond.ref).substr(0, slash),
                                  std::string_view(cond.ref).substr(slash + 1));
  auto want = cond.kind == Kind::kReachedVertex ? ElementKind::kVertex : ElementKind::kEdge;
  if (!found || found->kind != want) {
    throw SpecError("stop condition " + to_string(cond) + " names no " +
                    (want == ElementKind::kVertex ? "vertex" : "edge") + " of the suite");
  }
}

bool uses_time(const StopCondition& cond) {
  if (cond.kind == Kind::kTimeDuration) return true;
  return std::any_of(cond.children.begin(), cond.children.end(),
                     [](const StopCondition& c) { return uses_time(c); });
}

// ---------------------------------------------------------------------------

CoverageState::CoverageState(const Suite& suite)
    : suite_(&suite),
      vertices_(suite.vertex_count(), false),
      edges_(suite.edge_count(), false),
      requirements_(suite.requirements_universe().size(), false),
      models_(suite.models().size(), false) {}

void CoverageState::record_vertex(std::size_t v) {
  ++executed_vertices_;
  if (vertices_[v]) return;
  vertices_[v] = true;
  ++vertices_covered_;
  std::size_t m = suite_->vertex_model(v);
  if (!models_[m]) {
    models_[m] = true;
    ++models_reached_;
  }
  for (std::size_t r : suite_->vertex_requirements(v)) {
    if (!requirements_[r]) {
      requirements_[r] = true;
      ++requirements_covered_;
    }
  }
}

void CoverageState::record_edge(std::size_t e) {
  ++executed_edges_;
  if (!edges_[e]) {
    edges_[e] = true;
    ++edges_covered_;
  }
}

CoverageSnapshot CoverageState::snapshot(std::int64_t elapsed_us) const {
  CoverageSnapshot s;
  s.models_reached = models_reached_;
  s.models_total = suite_->models().size();
  s.vertices_covered = vertices_covered_;
  s.vertices_total = suite_->vertex_count();
  s.vertices_executed = executed_vertices_;
  s.edges_covered = edges_covered_;
  s.edges_total = suite_->edge_count();
  s.edges_executed = executed_edges_;
  s.requirements_covered = requirements_covered_;
  s.requirements_total = suite_->requirements_universe().size();
  s.elapsed_us = elapsed_us;
  return s;
}

namespace {

// 100 * covered / total >= pct without dividing, so 0/0 satisfies any
// threshold of 0 and an empty universe is vacuously covered.
bool percent_reached(std::size_t covered, std::size_t total, double pct) {
  return 100.0 * static_cast<double>(covered) >= pct * static_cast<double>(total);
}

bool names(const Suite& suite, const std::string& ref, ElementKind kind,
           const std::optional<std::size_t>& index) {
  if (!index) return false;
  auto slash = ref.find('/');
  auto found = suite.find_element(std::string_view(ref).substr(0, slash),
                                  std::string_view(ref).substr(slash + 1));
  return found && *found == ElementRef{kind, *index};
}

}  // namespace

bool is_fulfilled(const StopCondition& cond, const CoverageState& cov, const Suite& suite,
                  double elapsed_s) {
  switch (cond.kind) {
    case Kind::kEdgeCoverage:
      return percent_reached(cov.edges_covered(), suite.edge_count(), cond.value);
    case Kind::kVertexCoverage:
      return percent_reached(cov.vertices_covered(), suite.vertex_count(), cond.value);
    case Kind::kRequirementCoverage:
      return percent_reached(cov.requirements_covered(), suite.requirements_universe().size(),
                             cond.value);
    case Kind::kDependencyEdgeCoverage:
      for (std::size_t e = 0; e < suite.edge_count(); ++e) {
        if (suite.edge(e).dependency.value_or(0) >= cond.value && !cov.edge_visited(e)) {
          return false;
        }
      }
      return true;
    case Kind::kReachedVertex:
      return names(suite, cond.ref, ElementKind::kVertex, cov.last_vertex());
    case Kind::kReachedEdge:
      return names(suite, cond.ref, ElementKind::kEdge, cov.last_edge());
    case Kind::kTimeDuration:
      return elapsed_s >= cond.value;
    case Kind::kLength:
      return cov.executed_edges() >= cond.length;
    case Kind::kNever:
      return false;
    case Kind::kAll:
      return std::all_of(cond.children.begin(), cond.children.end(), [&](const auto& c) {
        return is_fulfilled(c, cov, suite, elapsed_s);
      });
    case Kind::kAny:
      return std::any_of(cond.children.begin(), cond.children.end(), [&](const auto& c) {
        return is_fulfilled(c, cov, suite, elapsed_s);
      });
  }
  return false;
}

}  // namespace mbt
