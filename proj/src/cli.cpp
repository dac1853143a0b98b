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

#include "mbt/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/engine.hpp"
#include "mbt/error.hpp"
#include "mbt/generators.hpp"
#include "mbt/model.hpp"
#include "mbt/run_log.hpp"
#include "mbt/stop.hpp"
#include "mbt/sut_sim.hpp"

namespace mbt {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error("cannot write " + path.string());
}

double pct(std::uint64_t covered, std::uint64_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

}  // namespace

int cmd_validate(const fs::path& suite_path, std::ostream& err) {
  try {
    Suite suite = load_suite(suite_path);
    int status = kExitPass;
    for (const Diagnostic& d : validate_suite(suite)) {
      err << to_string(d) << '\n';
      if (d.severity == Diagnostic::Severity::kError) status = kExitError;
    }
    return status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_generate(const fs::path& suite_path, const std::string& generator,
                 const std::string& stop, std::uint64_t seed, std::ostream& out,
                 std::ostream& err) {
  try {
    Suite suite = load_suite(suite_path);
    GeneratorSpec gen = parse_generator_spec(generator);
    StopCondition cond = parse_stop_spec(stop);
    std::ostringstream listing;
    for (const Step& s : generate_offline(suite, gen, cond, seed)) {
      listing << (s.kind == StepKind::kEdge ? "edge" : "vertex") << ' ' << s.name << " ("
              << s.model_id << '/' << s.element_id << ")\n";
    }
    out << listing.str();
    return kExitPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.out_dir.empty()) throw Error("no output directory given");
    Suite suite = load_suite(opts.suite_path);
    SutSpec sut = load_sut_spec(opts.sut_path);
    GeneratorSpec gen = parse_generator_spec(opts.generator);
    StopCondition cond = parse_stop_spec(opts.stop);
    if (!(opts.interval_s > 0.0)) throw SpecError("interval must be positive");
    RunConfig cfg;
    cfg.seed = opts.seed;
    cfg.snapshot_interval_s = opts.interval_s;
    if (opts.on_failure == "abort") {
      cfg.failure_policy = FailurePolicy::kAbort;
    } else if (opts.on_failure == "continue") {
      cfg.failure_policy = FailurePolicy::kContinue;
    } else {
      throw SpecError("--on-failure must be abort or continue");
    }

    SimAdapter sim(std::move(sut));
    std::vector<TimeSeriesPoint> points;
    cfg.on_snapshot = [&](const CoverageSnapshot& s) {
      const double t = static_cast<double>(s.elapsed_us) / 1e6;
      const CoverageStore& store = sim.store();
      points.push_back({t, Series::kModelEdgePct, pct(s.edges_covered, s.edges_total)});
      points.push_back({t, Series::kModelVertexPct, pct(s.vertices_covered, s.vertices_total)});
      points.push_back({t, Series::kCumulativeClient, store.cumulative_pct(Scope::kClient)});
      double page = store.current_page() ? store.per_page_pct(*store.current_page()) : 0.0;
      points.push_back({t, Series::kCurrentPageClient, page});
      points.push_back({t, Series::kCumulativeServer, store.cumulative_pct(Scope::kServer)});
    };

    RunReport report = run_online(suite, gen, cond, sim, cfg);

    fs::create_directories(opts.out_dir);
    const std::string summary = format_stats(report.final_coverage);
    write_file(opts.out_dir / kRunLogFile, export_run_log(report));
    write_file(opts.out_dir / kSeriesFile, emit_series(points));
    write_file(opts.out_dir / kSummaryFile, summary);
    write_file(opts.out_dir / kSuiteCopyFile, serialize_suite(suite));

    out << summary;
    out << "halted: " << to_string(report.halt);
    if (!report.halt_message.empty()) out << " (" << report.halt_message << ")";
    out << '\n';
    for (const Failure& f : report.failures) {
      err << "FAIL step " << f.seq << ": " << f.message;
      if (f.fault_id) err << " [" << *f.fault_id << "]";
      err << '\n';
    }
    if (is_error(report.halt)) {
      err << "error: " << report.halt_message << '\n';
      return kExitError;
    }
    return report.verdict == Verdict::kPass ? kExitPass : kExitFailures;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_report(const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    Suite suite = parse_suite(read_file(out_dir / kSuiteCopyFile));
    auto records = parse_run_log(read_file(out_dir / kRunLogFile));
    const std::string recorded = read_file(out_dir / kSummaryFile);
    const std::string derived = format_stats(fold(suite, records));
    out << derived;
    if (derived != recorded) {
      err << "error: internal consistency: " << kSummaryFile << " does not match the counts in "
          << kRunLogFile << '\n';
      return kExitError;
    }
    return kExitPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace mbt
