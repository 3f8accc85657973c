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

#ifndef GCLAB_SRC_MARK_INTERNAL_H_
#define GCLAB_SRC_MARK_INTERNAL_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <vector>

#include "gclab/heap.h"
#include "gclab/marking.h"

namespace gclab::internal {

struct MarkCounters {
  uint64_t visited = 0;
  uint64_t newly = 0;
  uint64_t cas_failures = 0;

  MarkCounters& operator+=(const MarkCounters& o) {
    visited += o.visited;
    newly += o.newly;
    cas_failures += o.cas_failures;
    return *this;
  }
};

template <MarkMode kMode>
inline bool TryMark(std::atomic<uint8_t>& byte, MarkCounters& c) {
  if constexpr (kMode == MarkMode::kPlain) {
    if (byte.load(std::memory_order_relaxed) != 0) return false;
    byte.store(1, std::memory_order_relaxed);
    ++c.newly;
    return true;
  } else {
    uint8_t expected = 0;
    if (byte.compare_exchange_strong(expected, 1, std::memory_order_acq_rel,
                                     std::memory_order_relaxed)) {
      ++c.newly;
      return true;
    }
    ++c.cas_failures;
    return false;
  }
}

// Scans one object's slots, marking and emitting every newly marked target.
template <MarkMode kMode, MarkScope kScope, typename Emit>
inline void ScanObject(const Heap& heap, uint32_t index, MarkCounters& c,
                       Emit&& emit) {
  const ObjectRecord& rec = heap.RecordAt(index);
  ++c.visited;
  const uint32_t n = rec.slot_count;
  const std::atomic<uint32_t>* slots = rec.slots.get();
  for (uint32_t s = 0; s < n; ++s) {
    const uint32_t t = slots[s].load(std::memory_order_acquire);
    if (t == ObjectRef::kNullIndex) continue;
    if constexpr (kScope == MarkScope::kYoungOnly) {
      if (heap.RecordAt(t).generation != Generation::kYoung) continue;
    }
    if (TryMark<kMode>(heap.MarkByte(t), c)) emit(t);
  }
}

template <MarkScope kScope>
inline bool InScope(const Heap& heap, ObjectRef r) {
  if (!heap.IsLive(r)) return false;
  if constexpr (kScope == MarkScope::kYoungOnly) {
    return heap.RecordAt(r.index()).generation == Generation::kYoung;
  }
  return true;
}

// Shared overflow queue for the worker-pool engine. Workers keep private
// stacks and publish surplus here; the idle count and the queue are only
// touched under `lock`, so "every worker idle and queue empty" observed
// under the lock is final for stop-the-world marking. With a SATB log the
// last idle worker also requires every SATB buffer to be empty.
class SharedMarkQueue {
 public:
  SharedMarkQueue(uint32_t workers, SatbQueueSet* satb)
      : workers_(workers), satb_(satb) {}

  void Seed(std::vector<uint32_t> items) { global_ = std::move(items); }

  // Publishes half of `local` if the shared queue looks starved.
  void MaybeShare(std::vector<uint32_t>& local) {
    if (workers_ == 1 || local.size() < kShareThreshold ||
        published_.load(std::memory_order_relaxed) >= kShareThreshold) {
      return;
    }
    const size_t half = local.size() / 2;
    {
      std::lock_guard<std::mutex> guard(lock_);
      global_.insert(global_.end(), local.end() - half, local.end());
      published_.store(global_.size(), std::memory_order_relaxed);
    }
    local.resize(local.size() - half);
    cv_.notify_all();
  }

  // Refills `local` (from the shared queue or SATB buffers) or returns false
  // once marking has terminated. `on_satb` filters drained SATB entries and
  // appends the newly marked ones to `local`.
  template <typename OnSatb>
  bool Refill(std::vector<uint32_t>& local, OnSatb&& on_satb) {
    std::unique_lock<std::mutex> guard(lock_);
    for (;;) {
      if (done_) return false;
      if (!global_.empty()) {
        const size_t take = std::min<size_t>(global_.size(), kShareThreshold);
        local.insert(local.end(), global_.end() - take, global_.end());
        global_.resize(global_.size() - take);
        published_.store(global_.size(), std::memory_order_relaxed);
        return true;
      }
      if (satb_ != nullptr) {
        drained_.clear();
        if (satb_->DrainInto(drained_) > 0) {
          on_satb(drained_, local);
          if (!local.empty()) return true;
          continue;
        }
      }
      if (++idle_ == workers_) {
        if (satb_ == nullptr || satb_->AllEmpty()) {
          done_ = true;
          guard.unlock();
          cv_.notify_all();
          return false;
        }
        --idle_;
        continue;
      }
      if (satb_ != nullptr) {
        cv_.wait_for(guard, std::chrono::microseconds(100));
      } else {
        cv_.wait(guard, [&] { return done_ || !global_.empty(); });
      }
      --idle_;
    }
  }

 private:
  static constexpr size_t kShareThreshold = 256;

  const uint32_t workers_;
  SatbQueueSet* const satb_;
  std::mutex lock_;
  std::condition_variable cv_;
  std::vector<uint32_t> global_;
  std::vector<uint32_t> drained_;
  std::atomic<size_t> published_{0};
  uint32_t idle_ = 0;
  bool done_ = false;
};

// Fills result.marked / marked_count from the heap mark bytes.
void CollectMarks(const Heap& heap, MarkResult& result);

}  // namespace gclab::internal

#endif  // GCLAB_SRC_MARK_INTERNAL_H_
