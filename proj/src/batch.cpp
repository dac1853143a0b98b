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

#include "mbt/batch.hpp"

#include <exception>

namespace mbt {

namespace {

BatchResult run_one(const Suite& suite, const GeneratorSpec& generator,
                    const StopCondition& stop, std::uint64_t seed, const BatchConfig& cfg) {
  PassingAdapter adapter;
  RunConfig rc;
  rc.seed = seed;
  rc.max_edges = cfg.max_edges;
  // Wall time would make results differ between runs; a frozen clock keeps
  // them comparable. Time-based stop conditions never fire here.
  rc.clock = [] { return std::int64_t{0}; };
  rc.snapshot_interval_s = 1e9;
  RunReport report = run_online(suite, generator, stop, adapter, rc);
  BatchResult r;
  r.seed = seed;
  r.halt = report.halt;
  r.coverage = report.final_coverage;
  r.coverage.elapsed_us = 0;
  return r;
}

}  // namespace

std::vector<BatchResult> run_batch_serial(const Suite& suite, const GeneratorSpec& generator,
                                          const StopCondition& stop,
                                          std::span<const std::uint64_t> seeds,
                                          const BatchConfig& cfg) {
  std::vector<BatchResult> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) out.push_back(run_one(suite, generator, stop, seed, cfg));
  return out;
}

std::vector<BatchResult> run_batch_parallel(const Suite& suite, const GeneratorSpec& generator,
                                            const StopCondition& stop,
                                            std::span<const std::uint64_t> seeds,
                                            const BatchConfig& cfg) {
  std::vector<BatchResult> out(seeds.size());
  // Exceptions may not leave an OpenMP region. Keep them per seed and
  // rethrow the one the serial loop would have hit first.
  std::vector<std::exception_ptr> errors(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = run_one(suite, generator, stop, seeds[k], cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace mbt
