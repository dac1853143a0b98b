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

// Serial vs OpenMP batches of seeded runs on a synthetic suite at the scale
// of 18 models, 177 vertices and 260 edges.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "mbt/batch.hpp"
#include "mbt/sut_sim.hpp"

namespace {

const mbt::Suite& big_suite() {
  static const mbt::Suite suite = [] {
    mbt::SynthConfig cfg;
    cfg.models = 18;
    cfg.pages = 160;
    cfg.extra_edges = 83;
    cfg.seed = 7;
    return mbt::synthesize(cfg).suite;
  }();
  return suite;
}

std::vector<std::uint64_t> seeds(std::int64_t n) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), 1);
  return out;
}

template <auto Batch>
void BM_Batch(benchmark::State& state, mbt::GeneratorSpec::Kind kind) {
  const auto s = seeds(state.range(0));
  const auto stop = mbt::StopCondition::edge_coverage(100);
  const mbt::GeneratorSpec gen{kind, {}};
  for (auto _ : state) {
    auto results = Batch(big_suite(), gen, stop, s, mbt::BatchConfig{});
    benchmark::DoNotOptimize(results.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RandomSerial(benchmark::State& state) {
  BM_Batch<mbt::run_batch_serial>(state, mbt::GeneratorSpec::Kind::kRandom);
}
void BM_RandomParallel(benchmark::State& state) {
  BM_Batch<mbt::run_batch_parallel>(state, mbt::GeneratorSpec::Kind::kRandom);
}
void BM_QuickRandomSerial(benchmark::State& state) {
  BM_Batch<mbt::run_batch_serial>(state, mbt::GeneratorSpec::Kind::kQuickRandom);
}
void BM_QuickRandomParallel(benchmark::State& state) {
  BM_Batch<mbt::run_batch_parallel>(state, mbt::GeneratorSpec::Kind::kQuickRandom);
}

}  // namespace

BENCHMARK(BM_RandomSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RandomParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_QuickRandomSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_QuickRandomParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
