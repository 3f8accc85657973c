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

#include "gclab/marking.h"

#include <thread>

#include "gclab/worker_gang.h"
#include "mark_internal.h"

namespace gclab {

using internal::MarkCounters;

namespace internal {

void CollectMarks(const Heap& heap, MarkResult& result) {
  const uint32_t n = heap.table_size();
  result.marked.assign(n, 0);
  uint64_t count = 0;
  for (uint32_t i = 0; i < n; ++i) {
    const uint8_t m = heap.MarkByte(i).load(std::memory_order_relaxed);
    result.marked[i] = m;
    count += m;
  }
  result.marked_count = count;
}

}  // namespace internal

SetMarkOutcome SetMark(Heap& heap, ObjectRef obj, MarkMode mode) {
  if (!heap.IsLive(obj)) throw InvalidArgument("SetMark: invalid object");
  MarkCounters c;
  std::atomic<uint8_t>& byte = heap.MarkByte(obj.index());
  const bool won = mode == MarkMode::kPlain
                       ? internal::TryMark<MarkMode::kPlain>(byte, c)
                       : internal::TryMark<MarkMode::kCas>(byte, c);
  return won ? SetMarkOutcome::kNewlyMarked : SetMarkOutcome::kAlreadyMarked;
}

namespace {

template <MarkMode kMode, MarkScope kScope>
std::vector<uint32_t> MarkRoots(const Heap& heap,
                                const std::vector<ObjectRef>& roots,
                                MarkCounters& c) {
  std::vector<uint32_t> out;
  for (ObjectRef r : roots) {
    if (!internal::InScope<kScope>(heap, r)) continue;
    if (internal::TryMark<kMode>(heap.MarkByte(r.index()), c)) {
      out.push_back(r.index());
    }
  }
  return out;
}

template <MarkMode kMode, MarkScope kScope>
MarkCounters MarkSerial(const Heap& heap, const std::vector<ObjectRef>& roots) {
  MarkCounters c;
  std::vector<uint32_t> stack = MarkRoots<kMode, kScope>(heap, roots, c);
  while (!stack.empty()) {
    const uint32_t cur = stack.back();
    stack.pop_back();
    internal::ScanObject<kMode, kScope>(heap, cur, c,
                                        [&](uint32_t t) { stack.push_back(t); });
  }
  return c;
}

template <MarkMode kMode, MarkScope kScope>
MarkCounters MarkWorkerPool(const Heap& heap,
                            const std::vector<ObjectRef>& roots,
                            uint32_t workers) {
  MarkCounters total;
  internal::SharedMarkQueue queue(workers, nullptr);
  queue.Seed(MarkRoots<kMode, kScope>(heap, roots, total));

  std::vector<MarkCounters> per_worker(workers);
  WorkerGang gang(workers);
  gang.Run([&](uint32_t id) {
    MarkCounters& c = per_worker[id];
    std::vector<uint32_t> local;
    auto no_satb = [](std::vector<uint32_t>&, std::vector<uint32_t>&) {};
    while (queue.Refill(local, no_satb)) {
      while (!local.empty()) {
        const uint32_t cur = local.back();
        local.pop_back();
        internal::ScanObject<kMode, kScope>(
            heap, cur, c, [&](uint32_t t) { local.push_back(t); });
        queue.MaybeShare(local);
      }
    }
  });
  for (const auto& c : per_worker) total += c;
  return total;
}

template <MarkMode kMode, MarkScope kScope>
MarkCounters MarkFrontier(const Heap& heap, const std::vector<ObjectRef>& roots,
                          const EngineConfig& cfg, uint32_t& dispatches) {
  MarkCounters total;
  std::vector<uint32_t> frontier = MarkRoots<kMode, kScope>(heap, roots, total);
  const uint32_t host_threads = HostThreadsForLanes(cfg.lanes);
  const uint64_t lanes = cfg.lanes;
  WorkerGang gang(host_threads);
  std::vector<std::vector<uint32_t>> next(host_threads);
  std::vector<MarkCounters> per_thread(host_threads);

  dispatches = 0;
  while (!frontier.empty()) {
    SpinFor(cfg.launch_latency);
    ++dispatches;
    std::atomic<uint64_t> cursor{0};
    const uint64_t size = frontier.size();
    gang.Run([&](uint32_t id) {
      MarkCounters& c = per_thread[id];
      auto& out = next[id];
      for (;;) {
        const uint64_t begin = cursor.fetch_add(lanes, std::memory_order_relaxed);
        if (begin >= size) break;
        const uint64_t end = std::min(begin + lanes, size);
        for (uint64_t i = begin; i < end; ++i) {
          internal::ScanObject<kMode, kScope>(
              heap, frontier[i], c, [&](uint32_t t) { out.push_back(t); });
        }
      }
    });
    if (host_threads == 1) {
      frontier.swap(next[0]);
      next[0].clear();
    } else {
      frontier.clear();
      for (auto& part : next) {
        frontier.insert(frontier.end(), part.begin(), part.end());
        part.clear();
      }
    }
  }
  for (const auto& c : per_thread) total += c;
  return total;
}

template <MarkMode kMode, MarkScope kScope>
MarkResult MarkWith(Heap& heap, const std::vector<ObjectRef>& roots,
                    const EngineConfig& cfg) {
  MarkResult result;
  heap.ClearMarks();
  Stopwatch timer;
  MarkCounters c;
  switch (cfg.kind) {
    case EngineKind::kSerial:
      c = MarkSerial<kMode, kScope>(heap, roots);
      break;
    case EngineKind::kWorkerPool:
      c = MarkWorkerPool<kMode, kScope>(heap, roots, cfg.workers);
      break;
    case EngineKind::kFrontier:
      c = MarkFrontier<kMode, kScope>(heap, roots, cfg, result.dispatch_count);
      break;
  }
  result.duration = timer.Elapsed();
  result.visited_count = c.visited;
  result.newly_marked = c.newly;
  result.cas_failures = c.cas_failures;
  internal::CollectMarks(heap, result);
  return result;
}

}  // namespace

MarkResult Mark(Heap& heap, const std::vector<ObjectRef>& roots,
                const EngineConfig& cfg, MarkScope scope) {
  cfg.Validate();
  const bool cas = cfg.mark_mode == MarkMode::kCas;
  if (scope == MarkScope::kWholeHeap) {
    return cas ? MarkWith<MarkMode::kCas, MarkScope::kWholeHeap>(heap, roots, cfg)
               : MarkWith<MarkMode::kPlain, MarkScope::kWholeHeap>(heap, roots, cfg);
  }
  return cas ? MarkWith<MarkMode::kCas, MarkScope::kYoungOnly>(heap, roots, cfg)
             : MarkWith<MarkMode::kPlain, MarkScope::kYoungOnly>(heap, roots, cfg);
}

uint64_t CountSnapshotViolations(const std::vector<uint8_t>& snapshot_live,
                                 const std::vector<uint8_t>& marked) {
  uint64_t violations = 0;
  for (size_t i = 0; i < snapshot_live.size(); ++i) {
    if (snapshot_live[i] && (i >= marked.size() || !marked[i])) ++violations;
  }
  return violations;
}

}  // namespace gclab
