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

#ifndef GCLAB_WORKLOAD_H_
#define GCLAB_WORKLOAD_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "gclab/heap.h"

namespace gclab {

// Linked-list promotion workload: floor(total_bytes / object_size) objects
// of one slot each, chained head to tail.
struct ListGenConfig {
  uint64_t total_bytes = 0;
  uint64_t object_size = 0;
};

uint64_t ListObjectCount(const ListGenConfig& cfg);

// Called when a young allocation fails; expected to free young space (for
// example by running a minor collection).
using YoungFullHandler = std::function<void(Heap&)>;

// Builds the list and installs its head as a root. With a handler the list
// may be longer than the young space: allocation failures invoke the
// handler and retry once. The tail is kept reachable through a temporary
// root while building so collections can move it.
ObjectRef GenLinkedList(Heap& heap, const ListGenConfig& cfg,
                        const YoungFullHandler& on_young_full = {});

struct GraphGenConfig {
  uint64_t n_objects = 1;
  double avg_out_degree = 8;
  uint64_t root_count = 1;
  uint64_t payload_size = 16;
  uint64_t seed = 0;
  Generation generation = Generation::kYoung;

  // root_count = max(1, n / 1000).
  static uint64_t DefaultRootCount(uint64_t n_objects);
};

// Random object graph: object i gets an out-degree drawn uniformly from
// [0, 2X] and each edge targets a uniformly random object (self and
// duplicate edges allowed). The first root_count objects become roots.
// Returns the roots, which are also appended to the heap root list.
std::vector<ObjectRef> GenRandomGraph(Heap& heap, const GraphGenConfig& cfg);

// Degree sequence and edge targets that GenRandomGraph would produce, without
// a heap. Used for dumps and tests.
struct GraphShape {
  std::vector<uint64_t> offsets;  // n + 1 prefix sums
  std::vector<uint32_t> targets;
};
GraphShape GenRandomGraphShape(const GraphGenConfig& cfg);

// Materializes `shape` into `heap`, returning the first `root_count`
// objects as roots (also installed as heap roots).
std::vector<ObjectRef> BuildGraph(Heap& heap, const GraphShape& shape,
                                  uint64_t root_count, uint64_t payload_size,
                                  Generation gen);

enum class MutationTarget : uint8_t { kRandomObject, kNull, kNewAllocation };

struct Mutation {
  uint64_t source_selector = 0;
  uint32_t slot_selector = 0;
  MutationTarget target = MutationTarget::kNull;
  uint64_t target_selector = 0;
  bool operator==(const Mutation&) const = default;
};

struct MutationStreamConfig {
  uint64_t seed = 0;
  uint64_t mutation_count = 0;
  // Relative weights of the three target kinds.
  double weight_random = 0.5;
  double weight_null = 0.25;
  double weight_allocation = 0.25;
  uint64_t allocation_payload = 16;
  uint32_t allocation_slots = 2;
};

struct MutationStream {
  MutationStreamConfig config;
  std::vector<Mutation> mutations;
};

MutationStream GenMutationStream(const MutationStreamConfig& cfg);

struct ReplayStats {
  uint64_t applied = 0;
  uint64_t skipped = 0;
  uint64_t allocated = 0;
};

// Applies one mutation through Heap::SetRef. Selectors are taken modulo the
// current table size; mutations whose source or target is dead, or whose
// source has no slots, are skipped.
void ApplyMutation(Heap& heap, const Mutation& m,
                   const MutationStreamConfig& cfg, ReplayStats& stats);

// Maps a 64-bit random word onto [0, bound) (multiply-shift, no modulo bias
// worth caring about at these sizes, portable across standard libraries).
inline uint64_t BoundedRandom(std::mt19937_64& rng, uint64_t bound) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

}  // namespace gclab

#endif  // GCLAB_WORKLOAD_H_
