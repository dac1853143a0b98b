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

// Many offline runs of one suite, one per seed. The serial version is the
// reference; the OpenMP version must return the same results in the same
// order, since every run owns its PRNG and state.

#ifndef MBT_BATCH_HPP_
#define MBT_BATCH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mbt/coverage.hpp"
#include "mbt/engine.hpp"
#include "mbt/generators.hpp"
#include "mbt/model.hpp"
#include "mbt/stop.hpp"

namespace mbt {

struct BatchResult {
  std::uint64_t seed = 0;
  HaltReason halt = HaltReason::kStopFulfilled;
  CoverageSnapshot coverage;  // elapsed_us zeroed

  bool operator==(const BatchResult&) const = default;
};

struct BatchConfig {
  std::uint64_t max_edges = 0;  // per run, 0 = no cap
};

std::vector<BatchResult> run_batch_serial(const Suite& suite, const GeneratorSpec& generator,
                                          const StopCondition& stop,
                                          std::span<const std::uint64_t> seeds,
                                          const BatchConfig& cfg = {});

std::vector<BatchResult> run_batch_parallel(const Suite& suite, const GeneratorSpec& generator,
                                            const StopCondition& stop,
                                            std::span<const std::uint64_t> seeds,
                                            const BatchConfig& cfg = {});

}  // namespace mbt

#endif  // MBT_BATCH_HPP_
