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


#include <gtest/gtest.h>

#include "gclab/heap_oracles.h"
#include "gclab/marking.h"
#include "gclab/workload.h"
#include "test_support.h"

namespace gclab {
namespace {

constexpr uint64_t kMiB = 1 << 20;

struct Graph {
  std::unique_ptr<Heap> heap;
  std::vector<ObjectRef> roots;
};

Graph MakeGraph(uint64_t n, double x, uint64_t seed) {
  Graph g;
  g.heap = std::make_unique<Heap>(HeapConfig{64 * kMiB, kMiB});
  GraphGenConfig cfg;
  cfg.n_objects = n;
  cfg.avg_out_degree = x;
  cfg.seed = seed;
  cfg.root_count = GraphGenConfig::DefaultRootCount(n);
  g.roots = GenRandomGraph(*g.heap, cfg);
  return g;
}

std::vector<EngineConfig> CasEngines() {
  return {EngineConfig::Serial(MarkMode::kCas), EngineConfig::WorkerPool(4, MarkMode::kCas),
          EngineConfig::Frontier(384, {}, MarkMode::kCas)};
}

TEST(ConcurrentMarkTest, PlainModeRejected) {
  Graph g = MakeGraph(100, 2, 1);
  EXPECT_THROW(ConcurrentMark(*g.heap, g.roots, EngineConfig::WorkerPool(2), 1, {}),
               InvalidArgument);
}

TEST(ConcurrentMarkTest, EmptyStreamMatchesStopTheWorld) {
  for (const EngineConfig& cfg : CasEngines()) {
    Graph g = MakeGraph(3000, 4, 8);
    const MarkResult stw = Mark(*g.heap, g.roots, cfg);
    for (uint32_t mutators : {0u, 1u, 4u}) {
      const ConcurrentMarkResult cm =
          ConcurrentMark(*g.heap, g.roots, cfg, mutators, MutationStream{});
      EXPECT_EQ(cm.mark.marked, stw.marked) << EngineKindName(cfg.kind);
      EXPECT_EQ(cm.mark.marked_count, stw.marked_count);
      EXPECT_EQ(cm.satb_logged, 0u);
    }
  }
}

// 0 -> 1 -> 2; every mutation nulls slot 0 of object 1 (selector 1 mod 3).
TEST(ConcurrentMarkTest, SeveredChainTailStaysMarked) {
  for (const EngineConfig& cfg : CasEngines()) {
    Heap heap({kMiB, kMiB});
    ObjectRef a = heap.Allocate(8, 1, Generation::kYoung);
    ObjectRef b = heap.Allocate(8, 1, Generation::kYoung);
    ObjectRef c = heap.Allocate(8, 1, Generation::kYoung);
    heap.SetRef(a, 0, b);
    heap.SetRef(b, 0, c);
    heap.AddRoot(a);
    MutationStream stream;
    stream.config.mutation_count = 1;
    stream.mutations.push_back({1, 0, MutationTarget::kNull, 0});
    const ConcurrentMarkResult cm = ConcurrentMark(heap, {a}, cfg, 1, stream);
    EXPECT_EQ(cm.replay.applied, 1u);
    EXPECT_TRUE(heap.GetRef(b, 0).IsNull());
    EXPECT_TRUE(heap.IsMarked(c)) << EngineKindName(cfg.kind);
    EXPECT_EQ(cm.mark.marked[c.index()], 1);
  }
}

TEST(ConcurrentMarkTest, NullOnlyStreamKeepsSnapshot) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = MakeGraph(4000, 3, seed);
    const auto snapshot = ReachableBitmap(*g.heap, g.roots);
    MutationStreamConfig mcfg;
    mcfg.seed = seed;
    mcfg.mutation_count = 5000;
    mcfg.weight_random = 0;
    mcfg.weight_allocation = 0;
    const ConcurrentMarkResult cm = ConcurrentMark(
        *g.heap, g.roots, EngineConfig::WorkerPool(4, MarkMode::kCas), 4,
        GenMutationStream(mcfg));
    EXPECT_EQ(CountSnapshotViolations(snapshot, cm.mark.marked), 0u) << "seed " << seed;
  }
}

TEST(ConcurrentMarkTest, AllocationsDuringMarkingAreBlack) {
  Graph g = MakeGraph(2000, 4, 3);
  const uint32_t before = g.heap->table_size();
  MutationStreamConfig mcfg;
  mcfg.seed = 5;
  mcfg.mutation_count = 3000;
  mcfg.weight_random = 0;
  mcfg.weight_null = 0;
  const ConcurrentMarkResult cm = ConcurrentMark(
      *g.heap, g.roots, EngineConfig::WorkerPool(2, MarkMode::kCas), 2,
      GenMutationStream(mcfg));
  EXPECT_GT(cm.replay.allocated, 0u);
  ASSERT_EQ(g.heap->table_size(), before + cm.replay.allocated);
  for (uint32_t i = before; i < g.heap->table_size(); ++i) {
    ASSERT_TRUE(g.heap->IsMarked(ObjectRef(i))) << i;
    ASSERT_EQ(cm.mark.marked[i], 1);
  }
}

TEST(ConcurrentMarkTest, MixedStreamsHaveNoViolations) {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    for (const EngineConfig& cfg : CasEngines()) {
      Graph g = MakeGraph(3000, 5, seed);
      const auto snapshot = ReachableBitmap(*g.heap, g.roots);
      MutationStreamConfig mcfg;
      mcfg.seed = seed + 100;
      mcfg.mutation_count = 4000;
      const ConcurrentMarkResult cm =
          ConcurrentMark(*g.heap, g.roots, cfg, 4, GenMutationStream(mcfg));
      EXPECT_EQ(CountSnapshotViolations(snapshot, cm.mark.marked), 0u)
          << EngineKindName(cfg.kind) << " seed " << seed;
      EXPECT_EQ(cm.replay.applied + cm.replay.skipped, 4000u);
      EXPECT_TRUE(g.heap->VerifyRememberedSet());
    }
  }
}

TEST(ConcurrentMarkTest, HeapUsableAfterwards) {
  Graph g = MakeGraph(500, 2, 4);
  MutationStreamConfig mcfg;
  mcfg.mutation_count = 500;
  ConcurrentMark(*g.heap, g.roots, EngineConfig::Serial(MarkMode::kCas), 2,
                 GenMutationStream(mcfg));
  // SATB and allocate-black are uninstalled again.
  ObjectRef fresh = g.heap->Allocate(8, 1, Generation::kYoung);
  EXPECT_FALSE(g.heap->IsMarked(fresh));
  const MarkResult again = Mark(*g.heap, g.roots, EngineConfig::Serial());
  const auto oracle = testing::SweepReachable(*g.heap, g.roots);
  std::vector<uint8_t> got = again.marked;
  got.resize(oracle.size());
  EXPECT_EQ(got, oracle);
}

}  // namespace
}  // namespace gclab
