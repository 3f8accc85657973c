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

#include "gclab/promotion.h"

#include <string>

#include "gclab/marking.h"
#include "gclab/worker_gang.h"

namespace gclab {

namespace {

struct CollectionScope {
  explicit CollectionScope(Heap& heap) : heap(heap) { heap.BeginCollection(); }
  ~CollectionScope() { heap.EndCollection(); }
  Heap& heap;
};

}  // namespace

PromotionReport Promote(Heap& heap, const PromotionPolicy& policy,
                        const EngineConfig& small_engine,
                        const EngineConfig& large_engine,
                        const EngineConfig& mark_engine) {
  small_engine.Validate();
  large_engine.Validate();
  mark_engine.Validate();
  CollectionScope scope(heap);
  PromotionReport report;

  // Live-set discovery: roots plus remembered-set targets, young only.
  std::vector<ObjectRef> sources = heap.roots();
  for (const RememberedSlot& e : heap.RememberedSet()) {
    ObjectRef t = heap.GetRef(e.object, e.slot);
    if (!t.IsNull()) sources.push_back(t);
  }
  MarkResult marks = Mark(heap, sources, mark_engine, MarkScope::kYoungOnly);
  report.mark_duration = marks.duration;

  std::vector<ObjectRef> small, large, dead;
  uint64_t live_bytes = 0;
  const uint32_t size = heap.table_size();
  for (uint32_t i = 0; i < size; ++i) {
    const ObjectRecord& rec = heap.RecordAt(i);
    if (!rec.live || rec.generation != Generation::kYoung) continue;
    if (marks.marked[i]) {
      live_bytes += rec.payload_size;
      (policy.RoutesToLarge(rec.payload_size) ? large : small)
          .emplace_back(i);
    } else {
      dead.emplace_back(i);
    }
  }
  heap.ClearMarks();
  if (live_bytes > heap.free(Generation::kOld)) {
    throw OldGenerationOverflow(
        "minor collection needs " + std::to_string(live_bytes) +
        " old-generation bytes, " + std::to_string(heap.free(Generation::kOld)) +
        " free");
  }

  CopyResult small_copy =
      CopyObjects(heap, small, Generation::kOld, small_engine);
  CopyResult large_copy =
      CopyObjects(heap, large, Generation::kOld, large_engine);
  report.copy_duration = small_copy.duration + large_copy.duration;
  report.objects_small_engine = small.size();
  report.objects_large_engine = large.size();
  (small_engine.is_device() ? report.objects_device : report.objects_cpu) +=
      small.size();
  (large_engine.is_device() ? report.objects_device : report.objects_cpu) +=
      large.size();

  ForwardingMap forwarding = std::move(small_copy.forwarding);
  forwarding.entries.insert(forwarding.entries.end(),
                            large_copy.forwarding.entries.begin(),
                            large_copy.forwarding.entries.end());
  Stopwatch fixup_timer;
  FixupReferences(heap, forwarding);
  for (auto [from, to] : forwarding.entries) heap.Reclaim(from);
  for (ObjectRef d : dead) heap.Reclaim(d);
  // The young generation is now empty, so no old->young slot can remain.
  heap.ClearRememberedSet();
  report.fixup_duration = fixup_timer.Elapsed();

  report.objects_promoted = forwarding.size();
  report.bytes_promoted = small_copy.bytes + large_copy.bytes;
  report.objects_reclaimed = dead.size();
  return report;
}

}  // namespace gclab
