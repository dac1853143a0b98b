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

#include "mbt/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "mbt/error.hpp"

namespace mbt {

using json = nlohmann::json;

namespace {

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(),
                      [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

Suite Suite::build(std::vector<Model> models, EntryPoint entry) {
  Suite s;
  s.models_ = std::move(models);
  s.entry_ = std::move(entry);

  std::set<std::string> requirement_set;
  for (std::size_t m = 0; m < s.models_.size(); ++m) {
    Model& model = s.models_[m];
    if (model.id.empty()) throw ModelError("", "", "model with empty id");
    if (!s.model_index_.emplace(model.id, m).second) {
      throw ModelError(model.id, "", "duplicate model id '" + model.id + "'");
    }
    s.vertex_offset_.push_back(s.vertex_model_.size());
    s.edge_offset_.push_back(s.edge_model_.size());
    auto& index = s.element_index_.emplace_back();

    model.init_stmts.clear();
    for (const auto& text : model.init_actions) {
      try {
        model.init_stmts.push_back(guard::parse_statement(text));
      } catch (const SyntaxError& e) {
        throw ModelError(model.id, "", "bad init action '" + text + "': " + e.what());
      }
    }

    for (std::size_t k = 0; k < model.vertices.size(); ++k) {
      const Vertex& v = model.vertices[k];
      if (v.id.empty()) throw ModelError(model.id, "", "vertex with empty id");
      ElementRef ref{ElementKind::kVertex, s.vertex_model_.size()};
      if (!index.emplace(v.id, ref).second) {
        throw ModelError(model.id, v.id, "duplicate id '" + v.id + "'");
      }
      if (v.name.empty()) throw ModelError(model.id, v.id, "vertex name is empty");
      if (v.shared_state && v.shared_state->empty()) {
        throw ModelError(model.id, v.id, "sharedState is empty");
      }
      for (const auto& tag : v.requirements) {
        if (!is_token(tag)) {
          throw ModelError(model.id, v.id, "malformed requirement tag '" + tag + "'");
        }
        requirement_set.insert(tag);
      }
      s.vertex_model_.push_back(m);
      s.out_edges_.emplace_back();
    }

    for (std::size_t k = 0; k < model.edges.size(); ++k) {
      Edge& e = model.edges[k];
      if (e.id.empty()) throw ModelError(model.id, "", "edge with empty id");
      ElementRef ref{ElementKind::kEdge, s.edge_model_.size()};
      if (!index.emplace(e.id, ref).second) {
        throw ModelError(model.id, e.id, "duplicate id '" + e.id + "'");
      }
      if (e.name.empty()) throw ModelError(model.id, e.id, "edge name is empty");
      auto endpoint = [&](const std::string& vid, const char* role) {
        auto it = index.find(vid);
        if (it == index.end() || it->second.kind != ElementKind::kVertex) {
          throw ModelError(model.id, e.id,
                           std::string("dangling edge endpoint: ") + role + " '" + vid +
                               "' of edge '" + e.id + "' is not a vertex of this model");
        }
        return it->second.index;
      };
      std::size_t src = endpoint(e.source, "source");
      std::size_t dst = endpoint(e.target, "target");
      if (e.weight && !(*e.weight > 0.0 && *e.weight <= 1.0)) {
        throw ModelError(model.id, e.id, "weight out of range (0, 1]");
      }
      if (e.dependency && (*e.dependency < 0 || *e.dependency > 100)) {
        throw ModelError(model.id, e.id, "dependency out of range [0, 100]");
      }
      e.guard_expr.reset();
      if (e.guard) {
        try {
          e.guard_expr = guard::parse_guard(*e.guard);
        } catch (const SyntaxError& err) {
          throw ModelError(model.id, e.id, "bad guard '" + *e.guard + "': " + err.what());
        }
      }
      e.action_stmts.clear();
      for (const auto& text : e.actions) {
        try {
          e.action_stmts.push_back(guard::parse_statement(text));
        } catch (const SyntaxError& err) {
          throw ModelError(model.id, e.id, "bad action '" + text + "': " + err.what());
        }
      }
      s.out_edges_[src].push_back(ref.index);
      s.edge_model_.push_back(m);
      s.edge_source_.push_back(src);
      s.edge_target_.push_back(dst);
    }
  }

  s.requirements_.assign(requirement_set.begin(), requirement_set.end());
  s.vertex_reqs_.resize(s.vertex_count());
  s.peers_.resize(s.vertex_count());
  for (std::size_t v = 0; v < s.vertex_count(); ++v) {
    const Vertex& vx = s.vertex(v);
    for (const auto& tag : vx.requirements) {
      auto it = std::lower_bound(s.requirements_.begin(), s.requirements_.end(), tag);
      s.vertex_reqs_[v].push_back(static_cast<std::size_t>(it - s.requirements_.begin()));
    }
    std::sort(s.vertex_reqs_[v].begin(), s.vertex_reqs_[v].end());
    s.vertex_reqs_[v].erase(std::unique(s.vertex_reqs_[v].begin(), s.vertex_reqs_[v].end()),
                            s.vertex_reqs_[v].end());
    if (vx.shared_state) s.groups_[*vx.shared_state].push_back(v);
  }
  for (const auto& [label, members] : s.groups_) {
    for (std::size_t v : members) s.peers_[v] = members;
  }

  auto entry_v = s.find_vertex(s.entry_.model, s.entry_.vertex);
  if (!entry_v) {
    throw ModelError(s.entry_.model, s.entry_.vertex,
                     "unknown entry element '" + s.entry_.model + "/" + s.entry_.vertex + "'");
  }
  s.entry_vertex_ = *entry_v;
  return s;
}

const Vertex& Suite::vertex(std::size_t v) const {
  std::size_t m = vertex_model_[v];
  return models_[m].vertices[v - vertex_offset_[m]];
}

const Edge& Suite::edge(std::size_t e) const {
  std::size_t m = edge_model_[e];
  return models_[m].edges[e - edge_offset_[m]];
}

std::span<const std::size_t> Suite::shared_peers(std::size_t v) const { return peers_[v]; }

std::span<const std::size_t> Suite::shared_group(std::string_view label) const {
  auto it = groups_.find(label);
  if (it == groups_.end()) return {};
  return it->second;
}

std::optional<ElementRef> Suite::find_element(std::string_view model,
                                              std::string_view element) const {
  auto m = model_index_.find(model);
  if (m == model_index_.end()) return std::nullopt;
  const auto& index = element_index_[m->second];
  auto it = index.find(element);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Suite::find_vertex(std::string_view model,
                                              std::string_view vertex) const {
  auto ref = find_element(model, vertex);
  if (!ref || ref->kind != ElementKind::kVertex) return std::nullopt;
  return ref->index;
}

std::optional<std::size_t> Suite::find_edge(std::string_view model,
                                            std::string_view edge) const {
  auto ref = find_element(model, edge);
  if (!ref || ref->kind != ElementKind::kEdge) return std::nullopt;
  return ref->index;
}

ElementRef Suite::resolve(std::string_view ref) const {
  auto slash = ref.find('/');
  if (slash == std::string_view::npos) {
    throw ModelError("", std::string(ref), "element reference must be 'model/element'");
  }
  auto model = ref.substr(0, slash);
  auto element = ref.substr(slash + 1);
  auto found = find_element(model, element);
  if (!found) {
    throw ModelError(std::string(model), std::string(element), "no such element");
  }
  return *found;
}

const std::string& Suite::model_id_of(ElementRef ref) const {
  std::size_t m = ref.kind == ElementKind::kVertex ? vertex_model_[ref.index]
                                                   : edge_model_[ref.index];
  return models_[m].id;
}

const std::string& Suite::element_id_of(ElementRef ref) const {
  return ref.kind == ElementKind::kVertex ? vertex(ref.index).id : edge(ref.index).id;
}

const std::string& Suite::name_of(ElementRef ref) const {
  return ref.kind == ElementKind::kVertex ? vertex(ref.index).name : edge(ref.index).name;
}

// ---------------------------------------------------------------------------
// JSON format

namespace {

// Reads one JSON object while tracking which keys were consumed, so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string model, std::string element, std::string what)
      : j_(j), model_(std::move(model)), element_(std::move(element)), what_(std::move(what)) {
    if (!j_.is_object()) fail(what_ + " must be a JSON object");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ModelError(model_, element_, msg); }

  const json* get(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string string(const char* key) {
    const json* v = get(key);
    if (!v) fail(what_ + " is missing \"" + key + "\"");
    if (!v->is_string()) fail(what_ + " key \"" + key + "\" must be a string");
    return v->get<std::string>();
  }

  std::optional<std::string> optional_string(const char* key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(what_ + " key \"" + key + "\" must be a string");
    return v->get<std::string>();
  }

  std::vector<std::string> strings(const char* key) {
    std::vector<std::string> out;
    const json* v = get(key);
    if (!v) return out;
    if (!v->is_array()) fail(what_ + " key \"" + key + "\" must be an array of strings");
    for (const auto& item : *v) {
      if (!item.is_string()) fail(what_ + " key \"" + key + "\" must be an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  const json& array(const char* key) {
    const json* v = get(key);
    if (!v) fail(what_ + " is missing \"" + key + "\"");
    if (!v->is_array()) fail(what_ + " key \"" + key + "\" must be an array");
    return *v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key \"" + it.key() + "\" in " + what_);
    }
  }

 private:
  const json& j_;
  std::string model_;
  std::string element_;
  std::string what_;
  std::set<std::string> seen_;
};

Vertex read_vertex(const json& j, const std::string& model_id) {
  std::string hint = j.is_object() && j.contains("id") && j["id"].is_string()
                         ? j["id"].get<std::string>()
                         : "";
  ObjectReader r(j, model_id, hint, "vertex");
  Vertex v;
  v.id = r.string("id");
  v.name = r.string("name");
  v.shared_state = r.optional_string("sharedState");
  v.requirements = r.strings("requirements");
  r.finish();
  return v;
}

Edge read_edge(const json& j, const std::string& model_id) {
  std::string hint = j.is_object() && j.contains("id") && j["id"].is_string()
                         ? j["id"].get<std::string>()
                         : "";
  ObjectReader r(j, model_id, hint, "edge");
  Edge e;
  e.id = r.string("id");
  e.name = r.string("name");
  e.source = r.string("source");
  e.target = r.string("target");
  e.guard = r.optional_string("guard");
  e.actions = r.strings("actions");
  if (const json* w = r.get("weight")) {
    if (!w->is_number()) r.fail("edge key \"weight\" must be a number");
    e.weight = w->get<double>();
  }
  if (const json* d = r.get("dependency")) {
    if (!d->is_number_integer()) r.fail("edge key \"dependency\" must be an integer");
    auto value = d->get<std::int64_t>();
    if (value < 0 || value > 100) r.fail("dependency out of range [0, 100]");
    e.dependency = static_cast<int>(value);
  }
  r.finish();
  return e;
}

Model read_model(const json& j) {
  std::string hint = j.is_object() && j.contains("id") && j["id"].is_string()
                         ? j["id"].get<std::string>()
                         : "";
  ObjectReader r(j, hint, "", "model");
  Model m;
  m.id = r.string("id");
  m.name = r.optional_string("name").value_or(m.id);
  m.init_actions = r.strings("initActions");
  for (const auto& v : r.array("vertices")) m.vertices.push_back(read_vertex(v, m.id));
  if (r.get("edges")) {
    for (const auto& e : r.array("edges")) m.edges.push_back(read_edge(e, m.id));
  }
  r.finish();
  return m;
}

}  // namespace

Suite parse_suite(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError("", "", std::string("malformed suite document: ") + e.what());
  }
  ObjectReader r(root, "", "", "suite");
  EntryPoint entry;
  {
    const json* ej = r.get("entry");
    if (!ej) r.fail("suite is missing \"entry\"");
    ObjectReader er(*ej, "", "", "entry");
    entry.model = er.string("model");
    entry.vertex = er.string("vertex");
    er.finish();
  }
  std::vector<Model> models;
  for (const auto& mj : r.array("models")) models.push_back(read_model(mj));
  r.finish();
  return Suite::build(std::move(models), std::move(entry));
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("", "", "cannot read suite file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str());
}

std::string serialize_suite(const Suite& suite) {
  json root;
  root["entry"] = {{"model", suite.entry().model}, {"vertex", suite.entry().vertex}};
  json models = json::array();
  for (const Model& m : suite.models()) {
    json mj;
    mj["id"] = m.id;
    mj["name"] = m.name;
    mj["initActions"] = m.init_actions;
    json vertices = json::array();
    for (const Vertex& v : m.vertices) {
      json vj;
      vj["id"] = v.id;
      vj["name"] = v.name;
      if (v.shared_state) vj["sharedState"] = *v.shared_state;
      vj["requirements"] = v.requirements;
      vertices.push_back(std::move(vj));
    }
    mj["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const Edge& e : m.edges) {
      json ej;
      ej["id"] = e.id;
      ej["name"] = e.name;
      ej["source"] = e.source;
      ej["target"] = e.target;
      if (e.guard) ej["guard"] = *e.guard;
      ej["actions"] = e.actions;
      if (e.weight) ej["weight"] = *e.weight;
      if (e.dependency) ej["dependency"] = *e.dependency;
      edges.push_back(std::move(ej));
    }
    mj["edges"] = std::move(edges);
    models.push_back(std::move(mj));
  }
  root["models"] = std::move(models);
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

std::vector<bool> reachable_vertices(const Suite& suite, std::size_t from) {
  std::vector<bool> seen(suite.vertex_count(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  auto visit = [&](std::size_t v) {
    if (!seen[v]) {
      seen[v] = true;
      queue.push_back(v);
    }
  };
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t e : suite.out_edges(v)) visit(suite.edge_target(e));
    for (std::size_t p : suite.shared_peers(v)) visit(p);
  }
  return seen;
}

std::string to_string(const Diagnostic& d) {
  std::string out = d.severity == Diagnostic::Severity::kError ? "error" : "warning";
  out += " [" + d.code + "] " + d.model;
  if (!d.element.empty()) out += "/" + d.element;
  out += ": " + d.message;
  return out;
}

std::vector<Diagnostic> validate_suite(const Suite& suite) {
  std::vector<Diagnostic> out;
  auto warn = [&](std::string code, ElementRef ref, std::string message) {
    out.push_back({Diagnostic::Severity::kWarning, std::move(code), suite.model_id_of(ref),
                   suite.element_id_of(ref), std::move(message)});
  };

  auto reachable = reachable_vertices(suite, suite.entry_vertex());
  for (std::size_t v = 0; v < suite.vertex_count(); ++v) {
    const Vertex& vx = suite.vertex(v);
    ElementRef ref{ElementKind::kVertex, v};
    if (!reachable[v]) warn("unreachable-vertex", ref, "vertex is unreachable from the entry");
    if (suite.out_edges(v).empty() && !vx.shared_state) {
      warn("dead-end-vertex", ref, "dead-end vertex: no out-edges and no shared state");
    }
    if (vx.shared_state && suite.shared_peers(v).size() == 1) {
      warn("singleton-shared-group", ref,
           "shared state '" + *vx.shared_state + "' is used by this vertex only");
    }
    if (!vx.name.starts_with("n_")) {
      warn("vertex-name-prefix", ref, "vertex name '" + vx.name + "' lacks the n_ prefix");
    }
  }
  for (std::size_t e = 0; e < suite.edge_count(); ++e) {
    const Edge& ex = suite.edge(e);
    if (!ex.name.starts_with("e_")) {
      warn("edge-name-prefix", {ElementKind::kEdge, e},
           "edge name '" + ex.name + "' lacks the e_ prefix");
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.model, a.element, a.code) < std::tie(b.model, b.element, b.code);
  });
  return out;
}

std::vector<std::pair<std::string, std::string>> shared_group(const Suite& suite,
                                                              std::string_view label) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t v : suite.shared_group(label)) {
    out.emplace_back(suite.models()[suite.vertex_model(v)].id, suite.vertex(v).id);
  }
  return out;
}

}  // namespace mbt
