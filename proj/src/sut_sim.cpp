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

#include "mbt/sut_sim.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mbt/error.hpp"
#include "mbt/rng.hpp"

namespace mbt {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const Page* SutSpec::find_page(std::string_view id) const {
  for (const Page& p : pages) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

namespace {

void only_keys(const json& j, std::initializer_list<std::string_view> allowed,
               const std::string& where) {
  if (!j.is_object()) throw SutError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SutError(where + ": unknown key \"" + key + "\"");
    }
  }
}

const json& required(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw SutError(where + " is missing \"" + key + "\"");
  return *it;
}

std::string string_at(const json& j, const char* key, const std::string& where) {
  const json& v = required(j, key, where);
  if (!v.is_string()) throw SutError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<SourceLines> read_sources(const json& j, const std::string& where) {
  if (!j.is_array()) throw SutError(where + " must be an array");
  std::vector<SourceLines> out;
  for (const json& item : j) {
    only_keys(item, {"source", "total", "lines"}, where);
    SourceLines s;
    s.source = string_at(item, "source", where);
    const json& total = required(item, "total", where);
    if (!total.is_number_unsigned() || total.get<std::uint64_t>() == 0 ||
        total.get<std::uint64_t>() > UINT32_MAX) {
      throw SutError(where + " '" + s.source + "': total must be a positive integer");
    }
    s.total = total.get<std::uint32_t>();
    const json& lines = required(item, "lines", where);
    if (!lines.is_array()) throw SutError(where + " '" + s.source + "': lines must be an array");
    for (const json& l : lines) {
      if (!l.is_number_unsigned() || l.get<std::uint64_t>() < 1 ||
          l.get<std::uint64_t>() > s.total) {
        throw SutError(where + " '" + s.source + "': line outside [1, " +
                       std::to_string(s.total) + "]");
      }
      s.lines.push_back(l.get<std::uint32_t>());
    }
    std::sort(s.lines.begin(), s.lines.end());
    s.lines.erase(std::unique(s.lines.begin(), s.lines.end()), s.lines.end());
    out.push_back(std::move(s));
  }
  return out;
}

ojson write_sources(const std::vector<SourceLines>& sources) {
  ojson out = ojson::array();
  for (const SourceLines& s : sources) {
    ojson j;
    j["source"] = s.source;
    j["total"] = s.total;
    j["lines"] = s.lines;
    out.push_back(std::move(j));
  }
  return out;
}

void check_links(const SutSpec& spec) {
  std::set<std::string, std::less<>> ids;
  for (const Page& p : spec.pages) {
    if (p.id.empty()) throw SutError("page with an empty id");
    if (!ids.insert(p.id).second) throw SutError("duplicate page id '" + p.id + "'");
  }
  if (!spec.find_page(spec.initial_page)) {
    throw SutError("initialPage '" + spec.initial_page + "' is not a page");
  }
  std::set<std::string, std::less<>> actions;
  std::set<std::string, std::less<>> verifications;
  for (const Page& p : spec.pages) {
    for (const auto& [name, effect] : p.elements) {
      if (!spec.find_page(effect.next_page)) {
        throw SutError("page '" + p.id + "' element '" + name + "': next page '" +
                       effect.next_page + "' does not exist");
      }
      actions.insert(name);
    }
    verifications.insert(p.verifications.begin(), p.verifications.end());
  }
  std::set<std::string, std::less<>> fault_ids;
  for (const FaultSpec& f : spec.faults) {
    if (f.id.empty()) throw SutError("fault with an empty id");
    if (!fault_ids.insert(f.id).second) throw SutError("duplicate fault id '" + f.id + "'");
    if (f.behavior == FaultSpec::Behavior::kWrongPage) {
      if (!actions.contains(f.element)) {
        throw SutError("fault '" + f.id + "': no page binds element '" + f.element + "'");
      }
      if (!spec.find_page(f.page)) {
        throw SutError("fault '" + f.id + "': page '" + f.page + "' does not exist");
      }
    } else if (!verifications.contains(f.element)) {
      throw SutError("fault '" + f.id + "': no page verifies '" + f.element + "'");
    }
  }
}

CodeCoverageEvent make_event(Scope scope, const SourceLines& s,
                             std::optional<std::string> page, double t) {
  CodeCoverageEvent ev;
  ev.timestamp_s = t;
  ev.scope = scope;
  ev.source_id = s.source;
  ev.page_id = std::move(page);
  ev.total_lines = s.total;
  ev.covered_lines = s.lines;
  return ev;
}

}  // namespace

SutSpec parse_sut_spec(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SutError(std::string("malformed SUT document: ") + e.what());
  }
  only_keys(root, {"initialPage", "pages", "faults"}, "SUT spec");
  SutSpec spec;
  spec.initial_page = string_at(root, "initialPage", "SUT spec");
  const json& pages = required(root, "pages", "SUT spec");
  if (!pages.is_array()) throw SutError("SUT spec: \"pages\" must be an array");
  for (const json& pj : pages) {
    only_keys(pj, {"id", "elements", "verifications", "clientSources"}, "page");
    Page p;
    p.id = string_at(pj, "id", "page");
    const std::string where = "page '" + p.id + "'";
    if (auto it = pj.find("elements"); it != pj.end()) {
      if (!it->is_object()) throw SutError(where + ": \"elements\" must be an object");
      for (const auto& [name, ej] : it->items()) {
        const std::string ewhere = where + " element '" + name + "'";
        only_keys(ej, {"next", "server"}, ewhere);
        TransitionEffect effect;
        effect.next_page = string_at(ej, "next", ewhere);
        if (auto s = ej.find("server"); s != ej.end()) {
          effect.server = read_sources(*s, ewhere + " server");
        }
        p.elements.emplace(name, std::move(effect));
      }
    }
    if (auto it = pj.find("verifications"); it != pj.end()) {
      if (!it->is_array()) throw SutError(where + ": \"verifications\" must be an array");
      for (const json& v : *it) {
        if (!v.is_string()) throw SutError(where + ": verification names must be strings");
        p.verifications.insert(v.get<std::string>());
      }
    }
    if (auto it = pj.find("clientSources"); it != pj.end()) {
      p.client_sources = read_sources(*it, where + " clientSources");
    }
    spec.pages.push_back(std::move(p));
  }
  if (auto it = root.find("faults"); it != root.end()) {
    if (!it->is_array()) throw SutError("SUT spec: \"faults\" must be an array");
    for (const json& fj : *it) {
      only_keys(fj, {"id", "element", "behavior", "page"}, "fault");
      FaultSpec f;
      f.id = string_at(fj, "id", "fault");
      const std::string where = "fault '" + f.id + "'";
      f.element = string_at(fj, "element", where);
      std::string behavior = string_at(fj, "behavior", where);
      if (behavior == "wrong_page") {
        f.behavior = FaultSpec::Behavior::kWrongPage;
        f.page = string_at(fj, "page", where);
      } else if (behavior == "verification_fail") {
        f.behavior = FaultSpec::Behavior::kVerificationFail;
        if (fj.contains("page")) throw SutError(where + ": \"page\" only applies to wrong_page");
      } else {
        throw SutError(where + ": unknown behavior '" + behavior + "'");
      }
      spec.faults.push_back(std::move(f));
    }
  }
  check_links(spec);
  return spec;
}

SutSpec load_sut_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SutError("cannot read SUT spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sut_spec(buf.str());
}

std::string serialize_sut_spec(const SutSpec& spec) {
  ojson root;
  root["initialPage"] = spec.initial_page;
  root["pages"] = ojson::array();
  for (const Page& p : spec.pages) {
    ojson pj;
    pj["id"] = p.id;
    pj["elements"] = ojson::object();
    for (const auto& [name, effect] : p.elements) {
      ojson ej;
      ej["next"] = effect.next_page;
      if (!effect.server.empty()) ej["server"] = write_sources(effect.server);
      pj["elements"][name] = std::move(ej);
    }
    pj["verifications"] = ojson::array();
    for (const std::string& v : p.verifications) pj["verifications"].push_back(v);
    pj["clientSources"] = write_sources(p.client_sources);
    root["pages"].push_back(std::move(pj));
  }
  root["faults"] = ojson::array();
  for (const FaultSpec& f : spec.faults) {
    ojson fj;
    fj["id"] = f.id;
    fj["element"] = f.element;
    if (f.behavior == FaultSpec::Behavior::kWrongPage) {
      fj["behavior"] = "wrong_page";
      fj["page"] = f.page;
    } else {
      fj["behavior"] = "verification_fail";
    }
    root["faults"].push_back(std::move(fj));
  }
  return root.dump(2) + "\n";
}

SimState sim_start(const SutSpec& spec) { return {spec.initial_page, std::nullopt}; }

std::vector<CodeCoverageEvent> page_visit_events(const SutSpec& spec, std::string_view page_id,
                                                 double timestamp_s) {
  std::vector<CodeCoverageEvent> out;
  const Page* page = spec.find_page(page_id);
  if (!page) return out;
  for (const SourceLines& s : page->client_sources) {
    out.push_back(make_event(Scope::kClient, s, page->id, timestamp_s));
  }
  return out;
}

SimStep sim_execute_edge(const SutSpec& spec, SimState& state, std::string_view name,
                         double timestamp_s) {
  SimStep step;
  const Page* page = spec.find_page(state.page);
  auto it = page ? page->elements.find(name) : decltype(page->elements.end()){};
  if (!page || it == page->elements.end()) {
    step.outcome.ok = false;
    step.outcome.message =
        "element '" + std::string(name) + "' is not available on page '" + state.page + "'";
    step.outcome.fault_id = state.misrouted_by;
    return step;
  }
  const TransitionEffect& effect = it->second;
  std::string next = effect.next_page;
  state.misrouted_by.reset();
  for (const FaultSpec& f : spec.faults) {
    if (f.behavior == FaultSpec::Behavior::kWrongPage && f.element == name) {
      next = f.page;
      state.misrouted_by = f.id;
      break;
    }
  }
  for (const SourceLines& s : effect.server) {
    step.events.push_back(make_event(Scope::kServer, s, std::nullopt, timestamp_s));
  }
  state.page = next;
  auto visit = page_visit_events(spec, next, timestamp_s);
  step.events.insert(step.events.end(), visit.begin(), visit.end());
  return step;
}

VerificationOutcome sim_verify_vertex(const SutSpec& spec, const SimState& state,
                                      std::string_view name) {
  VerificationOutcome out;
  const Page* page = spec.find_page(state.page);
  const bool on_page = page && page->verifications.contains(name);
  // Misrouted: the check runs against the wrong page.
  if (state.misrouted_by && !on_page) {
    out.verdict = Verdict::kFail;
    out.message = "verification '" + std::string(name) + "' failed on page '" + state.page + "'";
    out.fault_id = state.misrouted_by;
    return out;
  }
  for (const FaultSpec& f : spec.faults) {
    if (f.behavior == FaultSpec::Behavior::kVerificationFail && f.element == name) {
      out.verdict = Verdict::kFail;
      out.message = "verification '" + std::string(name) + "' failed (fault " + f.id + ")";
      out.fault_id = f.id;
      return out;
    }
  }
  if (on_page) return out;
  out.verdict = Verdict::kFail;
  out.message = "verification '" + std::string(name) + "' failed on page '" + state.page + "'";
  out.fault_id = state.misrouted_by;
  return out;
}

// ---------------------------------------------------------------------------

SimAdapter::SimAdapter(SutSpec spec, Clock clock)
    : spec_(std::move(spec)), clock_(clock ? std::move(clock) : steady_clock()) {
  check_links(spec_);
  start_us_ = clock_();
  state_ = sim_start(spec_);
  for (const Page& p : spec_.pages) {
    for (const auto& [name, effect] : p.elements) names_.insert(name);
    names_.insert(p.verifications.begin(), p.verifications.end());
  }
  store_.enter_page(state_.page);
  ingest(page_visit_events(spec_, state_.page, now_s()));
}

double SimAdapter::now_s() const { return static_cast<double>(clock_() - start_us_) / 1e6; }

void SimAdapter::ingest(std::vector<CodeCoverageEvent> events) {
  for (CodeCoverageEvent& ev : events) {
    store_.ingest(ev);
    events_.push_back(std::move(ev));
  }
}

bool SimAdapter::binds(std::string_view name) const { return names_.contains(name); }

ActionOutcome SimAdapter::execute_edge(std::string_view name, const guard::Context&) {
  SimStep step = sim_execute_edge(spec_, state_, name, now_s());
  // Every navigation is a fresh page load, same page included.
  if (step.outcome.ok) store_.enter_page(state_.page);
  ingest(std::move(step.events));
  return step.outcome;
}

VerificationOutcome SimAdapter::verify_vertex(std::string_view name, const guard::Context&) {
  return sim_verify_vertex(spec_, state_, name);
}

void SimAdapter::recover(std::string_view vertex_name, const guard::Context&) {
  state_.misrouted_by.reset();
  for (const Page& p : spec_.pages) {
    if (!p.verifications.contains(vertex_name)) continue;
    if (p.id == state_.page) return;
    state_.page = p.id;
    store_.enter_page(p.id);
    ingest(page_visit_events(spec_, p.id, now_s()));
    return;
  }
}

// ---------------------------------------------------------------------------

SyntheticSystem synthesize(const SynthConfig& cfg) {
  if (cfg.models == 0) throw SutError("synthesize: need at least one model");
  if (cfg.pages <= cfg.models) {
    throw SutError("synthesize: need more pages than models (one home page plus at least one "
                   "page per model)");
  }
  if (cfg.server_sources == 0) throw SutError("synthesize: need at least one server source");
  SplitMix64 rng(cfg.seed);

  // Private pages per model, spread as evenly as possible.
  const std::size_t private_pages = cfg.pages - 1;
  std::vector<std::size_t> per_model(cfg.models, private_pages / cfg.models);
  for (std::size_t m = 0; m < private_pages % cfg.models; ++m) ++per_model[m];

  auto lines_for = [&](std::uint32_t total) {
    std::vector<std::uint32_t> lines;
    for (std::uint32_t l = 1; l <= total; ++l) {
      if (rng.below(3) != 0) lines.push_back(l);
    }
    return lines;
  };
  auto server_delta = [&]() {
    std::size_t k = rng.below(cfg.server_sources);
    std::uint32_t total = static_cast<std::uint32_t>(20 + 10 * k);
    return std::vector<SourceLines>{
        {"Server" + std::to_string(k) + ".java", total, lines_for(total)}};
  };

  SutSpec sut;
  sut.initial_page = "home";
  Page home;
  home.id = "home";
  home.verifications.insert("n_verify_home");
  home.client_sources.push_back({"app.js", 50, lines_for(50)});
  sut.pages.push_back(std::move(home));

  std::vector<Model> models;
  std::size_t page_serial = 0;
  for (std::size_t m = 0; m < cfg.models; ++m) {
    Model model;
    model.id = "m" + std::to_string(m + 1);
    model.name = "Synthetic model " + std::to_string(m + 1);
    // Vertex 0 is the home vertex; page_of[i] names the page of vertex i.
    std::vector<std::string> page_of{"home"};
    model.vertices.push_back({"home", "n_verify_home", std::string("HOME"), {"REQ-HOME"}});
    for (std::size_t j = 0; j < per_model[m]; ++j) {
      std::string pid = "p" + std::to_string(++page_serial);
      page_of.push_back(pid);
      model.vertices.push_back(
          {pid, "n_verify_" + pid, std::nullopt, {"REQ-" + std::to_string(page_serial)}});
      Page page;
      page.id = pid;
      page.verifications.insert("n_verify_" + pid);
      page.client_sources.push_back({"app.js", 50, lines_for(50)});
      std::uint32_t own = static_cast<std::uint32_t>(10 + rng.below(30));
      page.client_sources.push_back({pid + ".js", own, lines_for(own)});
      sut.pages.push_back(std::move(page));
    }
    auto add_edge = [&](std::size_t from, std::size_t to) {
      std::string eid = "e" + std::to_string(model.edges.size() + 1);
      std::string action = "e_" + model.id + "_" + eid.substr(1);
      Edge e;
      e.id = eid;
      e.name = action;
      e.source = model.vertices[from].id;
      e.target = model.vertices[to].id;
      model.edges.push_back(std::move(e));
      Page* page = nullptr;
      for (Page& p : sut.pages) {
        if (p.id == page_of[from]) page = &p;
      }
      page->elements.emplace(action, TransitionEffect{page_of[to], server_delta()});
    };
    const std::size_t n = model.vertices.size();
    for (std::size_t i = 0; i < n; ++i) add_edge(i, (i + 1) % n);
    models.push_back(std::move(model));
  }

  for (std::size_t k = 0; k < cfg.extra_edges; ++k) {
    std::size_t m = rng.below(models.size());
    Model& model = models[m];
    const std::size_t n = model.vertices.size();
    std::size_t from = rng.below(n);
    std::size_t to = rng.below(n);
    std::string eid = "e" + std::to_string(model.edges.size() + 1);
    std::string action = "e_" + model.id + "_" + eid.substr(1);
    Edge e;
    e.id = eid;
    e.name = action;
    e.source = model.vertices[from].id;
    e.target = model.vertices[to].id;
    model.edges.push_back(std::move(e));
    std::string from_page = from == 0 ? "home" : model.vertices[from].id;
    std::string to_page = to == 0 ? "home" : model.vertices[to].id;
    for (Page& p : sut.pages) {
      if (p.id == from_page) p.elements.emplace(action, TransitionEffect{to_page, server_delta()});
    }
  }

  // Faults alternate between wrong_page on an edge and verification_fail on
  // a non-home vertex, each on a distinct element. A wrong_page edge never
  // leads to a faulty vertex, so neither fault can hide the other.
  std::vector<std::pair<std::string, std::string>> edge_pool;  // action, correct next page
  std::vector<std::string> vertex_pool;  // page ids
  for (const Page& p : sut.pages) {
    for (const auto& [name, effect] : p.elements) edge_pool.emplace_back(name, effect.next_page);
    if (p.id != "home") vertex_pool.push_back(p.id);
  }
  const std::size_t want_vertices = std::min(cfg.faults / 2, vertex_pool.size());
  std::vector<std::string> faulty_pages;
  for (std::size_t k = 0; k < want_vertices; ++k) {
    std::size_t i = rng.below(vertex_pool.size());
    faulty_pages.push_back(vertex_pool[i]);
    vertex_pool.erase(vertex_pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  std::erase_if(edge_pool, [&](const auto& entry) {
    return std::find(faulty_pages.begin(), faulty_pages.end(), entry.second) !=
           faulty_pages.end();
  });
  if (cfg.faults - want_vertices > edge_pool.size()) {
    throw SutError("synthesize: more faults than elements to bind them to");
  }
  std::size_t next_vertex = 0;
  for (std::size_t k = 0; k < cfg.faults; ++k) {
    FaultSpec f;
    f.id = "F" + std::to_string(k + 1);
    bool want_edge = k % 2 == 0 || next_vertex == faulty_pages.size();
    if (want_edge) {
      std::size_t i = rng.below(edge_pool.size());
      auto [action, correct] = edge_pool[i];
      edge_pool.erase(edge_pool.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<std::string> wrong;
      for (const Page& p : sut.pages) {
        if (p.id != correct) wrong.push_back(p.id);
      }
      f.element = action;
      f.behavior = FaultSpec::Behavior::kWrongPage;
      f.page = wrong[rng.below(wrong.size())];
    } else {
      f.element = "n_verify_" + faulty_pages[next_vertex++];
      f.behavior = FaultSpec::Behavior::kVerificationFail;
    }
    sut.faults.push_back(std::move(f));
  }

  check_links(sut);
  return {Suite::build(std::move(models), {"m1", "home"}), std::move(sut)};
}

}  // namespace mbt
