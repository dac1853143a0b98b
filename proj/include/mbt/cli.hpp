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

// The commands behind the `mbt` tool. Each returns the process exit status:
// 0 pass, 1 test failures, 2 anything else (bad input, model or engine
// errors, inconsistent artifacts).

#ifndef MBT_CLI_HPP_
#define MBT_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace mbt {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailures = 1;
inline constexpr int kExitError = 2;

// File names written by cmd_run and read back by cmd_report.
inline constexpr const char* kRunLogFile = "run.csv";
inline constexpr const char* kSeriesFile = "coverage.ndjson";
inline constexpr const char* kSummaryFile = "summary.txt";
inline constexpr const char* kSuiteCopyFile = "suite.json";

struct RunOptions {
  std::filesystem::path suite_path;
  std::filesystem::path sut_path;
  std::string generator = "random";
  std::string stop = "edge_coverage(100)";
  std::uint64_t seed = 0;
  double interval_s = 5.0;
  std::string on_failure = "abort";  // abort | continue
  std::filesystem::path out_dir;
};

// Diagnostics go to `err`.
int cmd_validate(const std::filesystem::path& suite_path, std::ostream& err);

// One `kind name (model/element)` line per step on `out`.
int cmd_generate(const std::filesystem::path& suite_path, const std::string& generator,
                 const std::string& stop, std::uint64_t seed, std::ostream& out,
                 std::ostream& err);

// Writes run.csv, coverage.ndjson, summary.txt and suite.json into
// `out_dir` (created if needed) and prints the summary on `out`.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

// Recounts the summary from run.csv and suite.json, prints it, and fails
// when it differs from summary.txt.
int cmd_report(const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

}  // namespace mbt

#endif  // MBT_CLI_HPP_
