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

// Test-model suites: directed graphs whose vertices are verification points
// and whose edges are stimuli, split across models that link to each other
// through shared-state labels.

#ifndef MBT_MODEL_HPP_
#define MBT_MODEL_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbt/guard.hpp"

namespace mbt {

struct Vertex {
  std::string id;
  std::string name;
  std::optional<std::string> shared_state;
  std::vector<std::string> requirements;

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  std::string id;
  std::string name;
  std::string source;
  std::string target;
  std::optional<std::string> guard;
  std::vector<std::string> actions;
  std::optional<double> weight;    // (0, 1]
  std::optional<int> dependency;   // [0, 100]

  // Filled in by Suite::build from `guard` / `actions`.
  guard::ExprPtr guard_expr;
  std::vector<guard::Stmt> action_stmts;

  // Compares the declared content only.
  bool operator==(const Edge& o) const {
    return id == o.id && name == o.name && source == o.source && target == o.target &&
           guard == o.guard && actions == o.actions && weight == o.weight &&
           dependency == o.dependency;
  }
};

struct Model {
  std::string id;
  std::string name;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<std::string> init_actions;

  std::vector<guard::Stmt> init_stmts;  // filled by Suite::build

  bool operator==(const Model& o) const {
    return id == o.id && name == o.name && vertices == o.vertices && edges == o.edges &&
           init_actions == o.init_actions;
  }
};

struct EntryPoint {
  std::string model;
  std::string vertex;

  bool operator==(const EntryPoint&) const = default;
};

enum class ElementKind { kVertex, kEdge };

// Suite-wide element handle. Vertices and edges are numbered densely in suite
// order (model by model, declaration order within a model).
struct ElementRef {
  ElementKind kind = ElementKind::kVertex;
  std::size_t index = 0;

  bool operator==(const ElementRef&) const = default;
};

// Immutable, fully linked suite. Construct with Suite::build or parse_suite.
class Suite {
 public:
  // Parses guards/actions, links edges to vertices and checks every
  // structural invariant. Throws ModelError naming the offending element.
  static Suite build(std::vector<Model> models, EntryPoint entry);

  const std::vector<Model>& models() const { return models_; }
  const EntryPoint& entry() const { return entry_; }
  std::size_t entry_vertex() const { return entry_vertex_; }

  // Sorted distinct requirement tags over all vertices.
  const std::vector<std::string>& requirements_universe() const { return requirements_; }

  std::size_t vertex_count() const { return vertex_model_.size(); }
  std::size_t edge_count() const { return edge_model_.size(); }

  const Vertex& vertex(std::size_t v) const;
  const Edge& edge(std::size_t e) const;
  std::size_t vertex_model(std::size_t v) const { return vertex_model_[v]; }
  std::size_t edge_model(std::size_t e) const { return edge_model_[e]; }
  std::size_t edge_source(std::size_t e) const { return edge_source_[e]; }
  std::size_t edge_target(std::size_t e) const { return edge_target_[e]; }

  // Out-edges of `v` in declaration order.
  std::span<const std::size_t> out_edges(std::size_t v) const { return out_edges_[v]; }

  // All vertices sharing `v`'s label, `v` included, in suite order. Empty
  // when `v` has no shared_state.
  std::span<const std::size_t> shared_peers(std::size_t v) const;
  std::span<const std::size_t> shared_group(std::string_view label) const;
  const std::map<std::string, std::vector<std::size_t>, std::less<>>& shared_groups() const {
    return groups_;
  }

  // Indices into requirements_universe().
  std::span<const std::size_t> vertex_requirements(std::size_t v) const {
    return vertex_reqs_[v];
  }

  std::optional<std::size_t> find_vertex(std::string_view model,
                                         std::string_view vertex) const;
  std::optional<std::size_t> find_edge(std::string_view model, std::string_view edge) const;
  std::optional<ElementRef> find_element(std::string_view model,
                                         std::string_view element) const;

  // Resolves "model/element". Throws ModelError when it names nothing.
  ElementRef resolve(std::string_view ref) const;

  const std::string& model_id_of(ElementRef ref) const;
  const std::string& element_id_of(ElementRef ref) const;
  const std::string& name_of(ElementRef ref) const;

  // Same declared content.
  bool operator==(const Suite& o) const { return entry_ == o.entry_ && models_ == o.models_; }

 private:
  std::vector<Model> models_;
  EntryPoint entry_;
  std::size_t entry_vertex_ = 0;
  std::vector<std::string> requirements_;

  std::vector<std::size_t> vertex_offset_;  // per model
  std::vector<std::size_t> edge_offset_;
  std::vector<std::size_t> vertex_model_;
  std::vector<std::size_t> edge_model_;
  std::vector<std::size_t> edge_source_;
  std::vector<std::size_t> edge_target_;
  std::vector<std::vector<std::size_t>> out_edges_;
  std::vector<std::vector<std::size_t>> vertex_reqs_;
  std::vector<std::vector<std::size_t>> peers_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> groups_;
  std::map<std::string, std::size_t, std::less<>> model_index_;
  std::vector<std::map<std::string, ElementRef, std::less<>>> element_index_;
};

// Parses the JSON suite format. Unknown keys are rejected.
Suite parse_suite(std::string_view document);
Suite load_suite(const std::filesystem::path& path);
std::string serialize_suite(const Suite& suite);

struct Diagnostic {
  enum class Severity { kError, kWarning };

  Severity severity = Severity::kWarning;
  std::string code;
  std::string model;
  std::string element;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

// Structural warnings: unreachable vertices, dead ends, singleton shared
// groups, names missing the n_/e_ prefix. Sorted by (model, element, code).
std::vector<Diagnostic> validate_suite(const Suite& suite);

// (model-id, vertex-id) of every vertex labelled `label`, in suite order.
std::vector<std::pair<std::string, std::string>> shared_group(const Suite& suite,
                                                              std::string_view label);

// Vertices reachable from `from` following edges (guards ignored) and
// shared-state jumps.
std::vector<bool> reachable_vertices(const Suite& suite, std::size_t from);

}  // namespace mbt

#endif  // MBT_MODEL_HPP_
