/*
 * Copyright (C) 2026 The gclab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Microbenchmarks for the marking and copying engines.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "gclab/copying.h"
#include "gclab/marking.h"
#include "gclab/workload.h"

namespace gclab {
namespace {

struct MarkFixture {
  std::unique_ptr<Heap> heap;
  std::vector<ObjectRef> roots;
};

// Graphs are cached per (n, X) so each benchmark only pays for generation once.
MarkFixture& GraphFor(uint64_t n, double x) {
  static std::map<std::pair<uint64_t, double>, MarkFixture> cache;
  auto& f = cache[{n, x}];
  if (!f.heap) {
    GraphGenConfig cfg;
    cfg.n_objects = n;
    cfg.avg_out_degree = x;
    cfg.seed = 1;
    cfg.root_count = GraphGenConfig::DefaultRootCount(n);
    f.heap = std::make_unique<Heap>(HeapConfig{n * cfg.payload_size + 1, 1});
    f.roots = GenRandomGraph(*f.heap, cfg);
  }
  return f;
}

void RunMark(benchmark::State& state, const EngineConfig& engine) {
  const auto n = static_cast<uint64_t>(state.range(0));
  const auto x = static_cast<double>(state.range(1));
  MarkFixture& f = GraphFor(n, x);
  uint64_t marked = 0;
  for (auto _ : state) {
    marked = Mark(*f.heap, f.roots, engine).marked_count;
    benchmark::DoNotOptimize(marked);
  }
  state.counters["marked"] = static_cast<double>(marked);
}

void BM_MarkSerialPlain(benchmark::State& s) { RunMark(s, EngineConfig::Serial()); }
void BM_MarkSerialCas(benchmark::State& s) {
  RunMark(s, EngineConfig::Serial(MarkMode::kCas));
}
void BM_MarkWorkerPool(benchmark::State& s) { RunMark(s, EngineConfig::WorkerPool(4)); }
void BM_MarkFrontier(benchmark::State& s) { RunMark(s, EngineConfig::Frontier()); }

void MarkArgs(benchmark::internal::Benchmark* b) {
  for (int64_t x : {8, 40, 200}) b->Args({50000, x});
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_MarkSerialPlain)->Apply(MarkArgs);
BENCHMARK(BM_MarkSerialCas)->Apply(MarkArgs);
BENCHMARK(BM_MarkWorkerPool)->Apply(MarkArgs);
BENCHMARK(BM_MarkFrontier)->Apply(MarkArgs);

void RunCopy(benchmark::State& state, const EngineConfig& engine) {
  CopyBenchConfig cfg;
  cfg.n_objects = static_cast<uint64_t>(state.range(0));
  cfg.engine = engine;
  cfg.repetitions = 1;
  for (auto _ : state) {
    const BandwidthReport r = CopyBench(cfg);
    state.SetIterationTime(r.median_duration.count() / 1e9);
  }
  state.SetBytesProcessed(state.iterations() * cfg.n_objects * cfg.object_size);
}

void BM_CopySingle(benchmark::State& s) { RunCopy(s, CopyEngineSingle()); }
void BM_CopyWorkers(benchmark::State& s) { RunCopy(s, CopyEngineWorkers(4)); }
void BM_CopyBulk(benchmark::State& s) { RunCopy(s, CopyEngineBulk(384, {})); }

void CopyArgs(benchmark::internal::Benchmark* b) {
  b->RangeMultiplier(16)->Range(1 << 10, 1 << 22)->UseManualTime();
}

BENCHMARK(BM_CopySingle)->Apply(CopyArgs);
BENCHMARK(BM_CopyWorkers)->Apply(CopyArgs);
BENCHMARK(BM_CopyBulk)->Apply(CopyArgs);

}  // namespace
}  // namespace gclab

BENCHMARK_MAIN();
