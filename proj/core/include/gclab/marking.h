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

#ifndef GCLAB_MARKING_H_
#define GCLAB_MARKING_H_

#include <chrono>
#include <cstdint>
#include <vector>

#include "gclab/engine_config.h"
#include "gclab/heap.h"
#include "gclab/workload.h"

namespace gclab {

struct MarkResult {
  // 0/1 per table entry (table size at the end of marking).
  std::vector<uint8_t> marked;
  uint64_t marked_count = 0;
  // Objects whose slots were scanned. Equals marked_count for quiescent
  // cas-mode and single-threaded runs; plain mode may rescan under races.
  uint64_t visited_count = 0;
  // Sum over all threads of kNewlyMarked outcomes.
  uint64_t newly_marked = 0;
  std::chrono::nanoseconds duration{0};
  // Frontier levels dispatched (frontier engine only).
  uint32_t dispatch_count = 0;
  uint64_t cas_failures = 0;
};

enum class MarkScope : uint8_t {
  kWholeHeap,
  // Minor-collection marking: only young objects are marked or traversed.
  kYoungOnly,
};

enum class SetMarkOutcome : uint8_t { kNewlyMarked, kAlreadyMarked };

// Marks one object. Plain mode is a test-then-store on the mark byte and may
// report kNewlyMarked to several racing callers; cas mode lets exactly one
// caller win.
SetMarkOutcome SetMark(Heap& heap, ObjectRef obj, MarkMode mode);

// Stop-the-world marking from `roots`. Clears and then sets the heap mark
// bytes. No mutator may run concurrently.
MarkResult Mark(Heap& heap, const std::vector<ObjectRef>& roots,
                const EngineConfig& cfg,
                MarkScope scope = MarkScope::kWholeHeap);

struct ConcurrentMarkResult {
  MarkResult mark;
  ReplayStats replay;
  uint64_t satb_logged = 0;
  // Objects marked by the final drain of SATB buffers after mutators joined.
  uint64_t remark_marked = 0;
};

// Snapshot-at-the-beginning marking with `mutators` threads replaying
// `stream` through Heap::SetRef while markers run. Objects allocated during
// marking are created marked. Requires cas mode.
ConcurrentMarkResult ConcurrentMark(Heap& heap,
                                    const std::vector<ObjectRef>& roots,
                                    const EngineConfig& cfg, uint32_t mutators,
                                    const MutationStream& stream);

// Snapshot-live objects that ended unmarked; zero for a correct run.
uint64_t CountSnapshotViolations(const std::vector<uint8_t>& snapshot_live,
                                 const std::vector<uint8_t>& marked);

}  // namespace gclab

#endif  // GCLAB_MARKING_H_
