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

#ifndef GCLAB_HEAP_H_
#define GCLAB_HEAP_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "gclab/object_ref.h"

namespace gclab {

struct HeapConfig {
  uint64_t young_capacity = 64ull << 20;
  uint64_t old_capacity = 256ull << 20;
};

enum class MarkState : uint8_t { kUnmarked = 0, kMarked = 1 };

// One heap object. Slots are atomics so that mutator threads can store into
// them while marker threads read them during concurrent marking.
struct ObjectRecord {
  uint64_t payload_size = 0;
  std::unique_ptr<std::byte[]> payload;
  uint32_t slot_count = 0;
  std::unique_ptr<std::atomic<uint32_t>[]> slots;
  Generation generation = Generation::kYoung;
  ObjectRef forward;
  bool live = false;

  std::span<std::byte> Payload() { return {payload.get(), payload_size}; }
  std::span<const std::byte> Payload() const {
    return {payload.get(), payload_size};
  }
  ObjectRef Slot(uint32_t i) const {
    return ObjectRef(slots[i].load(std::memory_order_acquire));
  }
};

// (old-generation object, slot index) whose slot targets a young object.
struct RememberedSlot {
  ObjectRef object;
  uint32_t slot = 0;
  auto operator<=>(const RememberedSlot&) const = default;
};

// Snapshot-at-the-beginning log. While installed on a heap, every slot store
// records the overwritten reference. Each appending thread owns a buffer; the
// slot exchange and the append happen under that buffer's lock, so a drainer
// that finds every buffer empty knows no overwrite is still in flight.
class SatbQueueSet {
 public:
  SatbQueueSet();
  ~SatbQueueSet();
  SatbQueueSet(const SatbQueueSet&) = delete;
  SatbQueueSet& operator=(const SatbQueueSet&) = delete;

  struct Buffer {
    std::mutex lock;
    std::vector<uint32_t> entries;
  };

  // Binds a private buffer to the calling thread for the scope lifetime.
  class ThreadScope {
   public:
    explicit ThreadScope(SatbQueueSet& set);
    ~ThreadScope();
    ThreadScope(const ThreadScope&) = delete;
    ThreadScope& operator=(const ThreadScope&) = delete;

   private:
    Buffer* previous_;
  };

  // Stores `value` into `slot` and logs the previous non-null value.
  uint32_t ExchangeAndLog(std::atomic<uint32_t>& slot, uint32_t value);

  // Moves every logged entry into `out`. Returns the number moved.
  size_t DrainInto(std::vector<uint32_t>& out);
  bool AllEmpty();
  uint64_t total_logged() const {
    return total_logged_.load(std::memory_order_relaxed);
  }

 private:
  std::mutex registry_lock_;
  std::vector<std::unique_ptr<Buffer>> buffers_;
  Buffer shared_;
  std::atomic<uint64_t> total_logged_{0};
};

// Index-based two-generation object heap.
//
// The object table is segmented and append-only: records never move and
// indices are never reused, so concurrent readers can hold record references
// while mutators allocate. Reclaimed records stay in the table as dead
// tombstones.
class Heap {
 public:
  explicit Heap(HeapConfig config);
  ~Heap();
  Heap(const Heap&) = delete;
  Heap& operator=(const Heap&) = delete;

  const HeapConfig& config() const { return config_; }

  ObjectRef Allocate(uint64_t payload_size, uint32_t slot_count,
                     Generation gen);

  // Stores `target` into `src`'s slot, maintaining the remembered set and,
  // when a SATB log is installed, recording the overwritten value.
  void SetRef(ObjectRef src, uint32_t slot, ObjectRef target);
  ObjectRef GetRef(ObjectRef src, uint32_t slot) const;

  bool IsLive(ObjectRef ref) const;
  const ObjectRecord& Record(ObjectRef ref) const;
  ObjectRecord& MutableRecord(ObjectRef ref);
  std::span<std::byte> Payload(ObjectRef ref);
  std::span<const std::byte> Payload(ObjectRef ref) const;

  // Number of table entries ever allocated, including dead ones.
  uint32_t table_size() const {
    return size_.load(std::memory_order_acquire);
  }
  uint64_t live_count() const;
  uint64_t live_count(Generation gen) const;
  uint64_t used(Generation gen) const;
  uint64_t capacity(Generation gen) const;
  uint64_t free(Generation gen) const { return capacity(gen) - used(gen); }

  // Roots are an ordered list; fixup after copying rewrites them in place.
  size_t AddRoot(ObjectRef ref);
  void SetRoot(size_t i, ObjectRef ref);
  void PopRoot();
  void ClearRoots();
  const std::vector<ObjectRef>& roots() const { return roots_; }

  std::vector<RememberedSlot> RememberedSet() const;
  size_t remembered_set_size() const;
  bool InRememberedSet(ObjectRef obj, uint32_t slot) const;
  // Recomputes the remembered set from a full scan of old objects.
  void RebuildRememberedSet();
  // Full-scan soundness check: exactly the old->young slots are remembered.
  bool VerifyRememberedSet() const;

  // Mark side array: one byte per table entry, same segmentation as records.
  std::atomic<uint8_t>& MarkByte(uint32_t index) const {
    return mark_dir_[index >> kSegmentShift].load(
        std::memory_order_acquire)[index & kSegmentMask];
  }
  bool IsMarked(ObjectRef ref) const {
    return MarkByte(ref.index()).load(std::memory_order_relaxed) != 0;
  }
  void ClearMarks();

  // Records created while allocate-black is on start out marked.
  void SetAllocateBlack(bool on) {
    allocate_black_.store(on, std::memory_order_release);
  }
  void InstallSatb(SatbQueueSet* set) {
    satb_.store(set, std::memory_order_release);
  }

  // Collection bookkeeping used by the copying and promotion code.
  void BeginCollection();
  void EndCollection();
  bool in_collection() const { return in_collection_; }
  void Reclaim(ObjectRef ref);
  void ClearRememberedSet();

  // Fast path for traversal code: the record behind a known-valid index.
  const ObjectRecord& RecordAt(uint32_t index) const {
    return record_dir_[index >> kSegmentShift].load(
        std::memory_order_acquire)[index & kSegmentMask];
  }

 private:
  static constexpr uint32_t kSegmentShift = 14;
  static constexpr uint32_t kSegmentSize = 1u << kSegmentShift;
  static constexpr uint32_t kSegmentMask = kSegmentSize - 1;
  static constexpr uint32_t kMaxSegments = 1u << 14;

  ObjectRecord& RecordAtMutable(uint32_t index) {
    return record_dir_[index >> kSegmentShift].load(
        std::memory_order_acquire)[index & kSegmentMask];
  }
  void CheckRef(ObjectRef ref, const char* what) const;

  HeapConfig config_;

  std::unique_ptr<std::atomic<ObjectRecord*>[]> record_dir_;
  std::unique_ptr<std::atomic<std::atomic<uint8_t>*>[]> mark_dir_;
  std::atomic<uint32_t> size_{0};
  mutable std::mutex alloc_lock_;
  uint64_t used_[2] = {0, 0};
  uint64_t live_[2] = {0, 0};

  std::vector<ObjectRef> roots_;

  mutable std::mutex remset_lock_;
  std::set<RememberedSlot> remembered_;

  std::atomic<bool> allocate_black_{false};
  std::atomic<SatbQueueSet*> satb_{nullptr};
  bool in_collection_ = false;
};

}  // namespace gclab

#endif  // GCLAB_HEAP_H_
