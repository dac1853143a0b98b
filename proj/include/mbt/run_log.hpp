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

// The per-step run log (run.csv) and the fold that recounts coverage from
// it without going through the engine.
//
// Columns: seq,offset_s,kind,model,element,name,verdict,context
//   offset_s  microsecond offset from run start, printed as S.UUUUUU
//   kind      vertex | edge | jump
//   verdict   pass | fail | fail:<fault_id>; empty for edges that passed
//             and for jumps

#ifndef MBT_RUN_LOG_HPP_
#define MBT_RUN_LOG_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/engine.hpp"
#include "mbt/model.hpp"

namespace mbt {

inline constexpr std::string_view kRunLogHeader =
    "seq,offset_s,kind,model,element,name,verdict,context";

std::string export_run_log(const RunReport& report);
std::string export_run_log(std::span<const StepRecord> records);

// Inverse of export_run_log. `step.index` is left at 0; fold() resolves
// elements by id. Throws CoverageError on a malformed or truncated document
// (every row, the last one included, must end in a newline).
std::vector<StepRecord> parse_run_log(std::string_view document);

// Recounts coverage from the log alone. Throws CoverageError when a row
// names an element the suite does not have.
CoverageSnapshot fold(const Suite& suite, std::span<const StepRecord> records);

}  // namespace mbt

#endif  // MBT_RUN_LOG_HPP_
