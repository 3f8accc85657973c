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

#include <latch>
#include <thread>

#include "gclab/marking.h"
#include "gclab/worker_gang.h"
#include "mark_internal.h"

namespace gclab {

using internal::MarkCounters;

namespace {

constexpr MarkMode kCas = MarkMode::kCas;
constexpr MarkScope kWhole = MarkScope::kWholeHeap;

// Marks drained SATB entries and appends the winners to `out`.
void MarkDrained(const Heap& heap, const std::vector<uint32_t>& drained,
                 std::vector<uint32_t>& out, MarkCounters& c) {
  for (uint32_t t : drained) {
    if (internal::TryMark<kCas>(heap.MarkByte(t), c)) out.push_back(t);
  }
}

void DrainToFixpoint(const Heap& heap, std::vector<uint32_t>& stack,
                     MarkCounters& c) {
  while (!stack.empty()) {
    const uint32_t cur = stack.back();
    stack.pop_back();
    internal::ScanObject<kCas, kWhole>(heap, cur, c,
                                       [&](uint32_t t) { stack.push_back(t); });
  }
}

MarkCounters RunPoolMarkers(const Heap& heap, std::vector<uint32_t> seeds,
                            uint32_t markers, SatbQueueSet& satb) {
  internal::SharedMarkQueue queue(markers, &satb);
  queue.Seed(std::move(seeds));
  std::vector<MarkCounters> per_marker(markers);
  WorkerGang gang(markers);
  gang.Run([&](uint32_t id) {
    MarkCounters& c = per_marker[id];
    std::vector<uint32_t> local;
    auto on_satb = [&](std::vector<uint32_t>& drained,
                       std::vector<uint32_t>& out) {
      MarkDrained(heap, drained, out, c);
    };
    while (queue.Refill(local, on_satb)) {
      while (!local.empty()) {
        const uint32_t cur = local.back();
        local.pop_back();
        internal::ScanObject<kCas, kWhole>(
            heap, cur, c, [&](uint32_t t) { local.push_back(t); });
        queue.MaybeShare(local);
      }
    }
  });
  MarkCounters total;
  for (const auto& c : per_marker) total += c;
  return total;
}

// Level-synchronous marking that folds drained SATB entries into the next
// level; terminates when a level is empty and so are all SATB buffers.
MarkCounters RunFrontierMarker(const Heap& heap, std::vector<uint32_t> frontier,
                               const EngineConfig& cfg, SatbQueueSet& satb,
                               uint32_t& dispatches) {
  MarkCounters c;
  std::vector<uint32_t> next, drained;
  for (;;) {
    if (frontier.empty()) {
      drained.clear();
      satb.DrainInto(drained);
      MarkDrained(heap, drained, frontier, c);
      if (frontier.empty()) {
        if (satb.AllEmpty()) break;
        continue;
      }
    }
    SpinFor(cfg.launch_latency);
    ++dispatches;
    for (uint32_t index : frontier) {
      internal::ScanObject<kCas, kWhole>(heap, index, c,
                                         [&](uint32_t t) { next.push_back(t); });
    }
    frontier.swap(next);
    next.clear();
  }
  return c;
}

}  // namespace

ConcurrentMarkResult ConcurrentMark(Heap& heap,
                                    const std::vector<ObjectRef>& roots,
                                    const EngineConfig& cfg, uint32_t mutators,
                                    const MutationStream& stream) {
  cfg.Validate();
  if (cfg.mark_mode != MarkMode::kCas) {
    throw InvalidArgument("concurrent marking requires cas mark mode");
  }
  ConcurrentMarkResult result;
  MarkCounters totals;

  heap.ClearMarks();
  SatbQueueSet satb;
  heap.InstallSatb(&satb);
  heap.SetAllocateBlack(true);

  Stopwatch timer;
  std::vector<uint32_t> seeds;
  for (ObjectRef r : roots) {
    if (heap.IsLive(r) &&
        internal::TryMark<kCas>(heap.MarkByte(r.index()), totals)) {
      seeds.push_back(r.index());
    }
  }

  // Mutators are released together with the markers.
  std::latch started(1);
  std::vector<ReplayStats> replay(mutators);
  std::vector<std::exception_ptr> faults(mutators);
  std::vector<std::thread> threads;
  threads.reserve(mutators);
  for (uint32_t id = 0; id < mutators; ++id) {
    threads.emplace_back([&, id] {
      try {
        SatbQueueSet::ThreadScope scope(satb);
        started.wait();
        for (size_t i = id; i < stream.mutations.size(); i += mutators) {
          ApplyMutation(heap, stream.mutations[i], stream.config, replay[id]);
        }
      } catch (...) {
        faults[id] = std::current_exception();
      }
    });
  }

  started.count_down();
  try {
    if (cfg.kind == EngineKind::kFrontier) {
      totals += RunFrontierMarker(heap, std::move(seeds), cfg, satb,
                                  result.mark.dispatch_count);
    } else {
      const uint32_t markers =
          cfg.kind == EngineKind::kWorkerPool ? cfg.workers : 1;
      totals += RunPoolMarkers(heap, std::move(seeds), markers, satb);
    }
  } catch (...) {
    for (auto& t : threads) t.join();
    heap.InstallSatb(nullptr);
    heap.SetAllocateBlack(false);
    throw;
  }
  for (auto& t : threads) t.join();

  // Remark: mutators are stopped; anything they logged after the markers
  // terminated is drained here.
  std::vector<uint32_t> drained, stack;
  satb.DrainInto(drained);
  MarkCounters remark;
  MarkDrained(heap, drained, stack, remark);
  DrainToFixpoint(heap, stack, remark);
  result.remark_marked = remark.newly;
  totals += remark;

  heap.InstallSatb(nullptr);
  heap.SetAllocateBlack(false);
  result.mark.duration = timer.Elapsed();

  for (uint32_t id = 0; id < mutators; ++id) {
    if (faults[id]) {
      try {
        std::rethrow_exception(faults[id]);
      } catch (const std::exception& e) {
        throw GcLabError(std::string("mutator thread fault: ") + e.what());
      }
    }
    result.replay.applied += replay[id].applied;
    result.replay.skipped += replay[id].skipped;
    result.replay.allocated += replay[id].allocated;
  }
  result.satb_logged = satb.total_logged();
  result.mark.visited_count = totals.visited;
  result.mark.newly_marked = totals.newly;
  result.mark.cas_failures = totals.cas_failures;
  internal::CollectMarks(heap, result.mark);
  return result;
}

}  // namespace gclab
