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

#include "gclab/workload.h"

#include <cmath>
#include <string>

namespace gclab {

uint64_t ListObjectCount(const ListGenConfig& cfg) {
  if (cfg.object_size == 0) throw InvalidArgument("object_size must be > 0");
  return cfg.total_bytes / cfg.object_size;
}

ObjectRef GenLinkedList(Heap& heap, const ListGenConfig& cfg,
                        const YoungFullHandler& on_young_full) {
  const uint64_t count = ListObjectCount(cfg);
  if (count == 0) {
    throw InvalidArgument("object_size " + std::to_string(cfg.object_size) +
                          " exceeds total_bytes " +
                          std::to_string(cfg.total_bytes));
  }
  auto allocate = [&] {
    try {
      return heap.Allocate(cfg.object_size, 1, Generation::kYoung);
    } catch (const AllocationFailure&) {
      if (!on_young_full) throw;
      on_young_full(heap);
      return heap.Allocate(cfg.object_size, 1, Generation::kYoung);
    }
  };

  ObjectRef head = allocate();
  const size_t head_root = heap.AddRoot(head);
  const size_t tail_root = heap.AddRoot(head);
  for (uint64_t i = 1; i < count; ++i) {
    ObjectRef next = allocate();
    heap.SetRef(heap.roots()[tail_root], 0, next);
    heap.SetRoot(tail_root, next);
  }
  heap.PopRoot();
  return heap.roots()[head_root];
}

uint64_t GraphGenConfig::DefaultRootCount(uint64_t n_objects) {
  return std::max<uint64_t>(1, n_objects / 1000);
}

GraphShape GenRandomGraphShape(const GraphGenConfig& cfg) {
  if (cfg.n_objects == 0) throw InvalidArgument("n_objects must be >= 1");
  if (cfg.n_objects > 0xFFFFFFF0ull) throw InvalidArgument("n_objects too large");
  if (cfg.root_count == 0) throw InvalidArgument("root_count must be >= 1");
  if (cfg.root_count > cfg.n_objects) {
    throw InvalidArgument("root_count exceeds n_objects");
  }
  if (!(cfg.avg_out_degree >= 0) || !std::isfinite(cfg.avg_out_degree)) {
    throw InvalidArgument("avg_out_degree must be a finite value >= 0");
  }
  const uint64_t max_degree =
      static_cast<uint64_t>(std::llround(2.0 * cfg.avg_out_degree));

  std::mt19937_64 rng(cfg.seed);
  GraphShape shape;
  shape.offsets.resize(cfg.n_objects + 1);
  shape.offsets[0] = 0;
  for (uint64_t i = 0; i < cfg.n_objects; ++i) {
    shape.offsets[i + 1] = shape.offsets[i] + BoundedRandom(rng, max_degree + 1);
  }
  shape.targets.resize(shape.offsets.back());
  for (auto& t : shape.targets) {
    t = static_cast<uint32_t>(BoundedRandom(rng, cfg.n_objects));
  }
  return shape;
}

std::vector<ObjectRef> BuildGraph(Heap& heap, const GraphShape& shape,
                                  uint64_t root_count, uint64_t payload_size,
                                  Generation gen) {
  const uint64_t n = shape.offsets.size() - 1;
  if (root_count > n) throw InvalidArgument("root_count exceeds n_objects");
  std::vector<ObjectRef> objects;
  objects.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    const uint64_t degree = shape.offsets[i + 1] - shape.offsets[i];
    objects.push_back(
        heap.Allocate(payload_size, static_cast<uint32_t>(degree), gen));
  }
  for (uint64_t i = 0; i < n; ++i) {
    const uint64_t begin = shape.offsets[i];
    for (uint64_t e = begin; e < shape.offsets[i + 1]; ++e) {
      heap.SetRef(objects[i], static_cast<uint32_t>(e - begin),
                  objects[shape.targets[e]]);
    }
  }
  std::vector<ObjectRef> roots(objects.begin(), objects.begin() + root_count);
  for (ObjectRef r : roots) heap.AddRoot(r);
  return roots;
}

std::vector<ObjectRef> GenRandomGraph(Heap& heap, const GraphGenConfig& cfg) {
  GraphShape shape = GenRandomGraphShape(cfg);
  return BuildGraph(heap, shape, cfg.root_count, cfg.payload_size,
                    cfg.generation);
}

MutationStream GenMutationStream(const MutationStreamConfig& cfg) {
  const double total =
      cfg.weight_random + cfg.weight_null + cfg.weight_allocation;
  if (!(cfg.weight_random >= 0 && cfg.weight_null >= 0 &&
        cfg.weight_allocation >= 0) ||
      (cfg.mutation_count > 0 && !(total > 0))) {
    throw InvalidArgument("mutation weights must be >= 0 with a positive sum");
  }
  MutationStream stream;
  stream.config = cfg;
  stream.mutations.reserve(cfg.mutation_count);
  std::mt19937_64 rng(cfg.seed ^ 0x6d75746174696f6eull);
  // Integer thresholds keep the kind choice independent of floating-point
  // library behavior.
  const uint64_t scale = 1ull << 32;
  const uint64_t cut_random =
      total > 0 ? static_cast<uint64_t>(cfg.weight_random / total * scale) : 0;
  const uint64_t cut_null =
      total > 0 ? static_cast<uint64_t>((cfg.weight_random + cfg.weight_null) /
                                        total * scale)
                : 0;
  for (uint64_t i = 0; i < cfg.mutation_count; ++i) {
    Mutation m;
    m.source_selector = rng();
    m.slot_selector = static_cast<uint32_t>(rng());
    const uint64_t pick = BoundedRandom(rng, scale);
    m.target = pick < cut_random ? MutationTarget::kRandomObject
               : pick < cut_null ? MutationTarget::kNull
                                 : MutationTarget::kNewAllocation;
    m.target_selector = rng();
    stream.mutations.push_back(m);
  }
  return stream;
}

void ApplyMutation(Heap& heap, const Mutation& m,
                   const MutationStreamConfig& cfg, ReplayStats& stats) {
  const uint32_t size = heap.table_size();
  if (size == 0) {
    ++stats.skipped;
    return;
  }
  const ObjectRef src(static_cast<uint32_t>(m.source_selector % size));
  if (!heap.IsLive(src)) {
    ++stats.skipped;
    return;
  }
  const uint32_t slots = heap.RecordAt(src.index()).slot_count;
  if (slots == 0) {
    ++stats.skipped;
    return;
  }
  ObjectRef target;
  switch (m.target) {
    case MutationTarget::kNull:
      break;
    case MutationTarget::kRandomObject:
      target = ObjectRef(static_cast<uint32_t>(m.target_selector % size));
      if (!heap.IsLive(target)) {
        ++stats.skipped;
        return;
      }
      break;
    case MutationTarget::kNewAllocation:
      try {
        target = heap.Allocate(cfg.allocation_payload, cfg.allocation_slots,
                               Generation::kYoung);
      } catch (const AllocationFailure&) {
        ++stats.skipped;
        return;
      }
      ++stats.allocated;
      break;
  }
  heap.SetRef(src, m.slot_selector % slots, target);
  ++stats.applied;
}

}  // namespace gclab
