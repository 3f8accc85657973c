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

#include "gclab/heap.h"

#include <cstring>
#include <string>

namespace gclab {

const char* GenerationName(Generation gen) {
  return gen == Generation::kYoung ? "young" : "old";
}

namespace {

thread_local SatbQueueSet::Buffer* tls_satb_buffer = nullptr;

size_t GenIndex(Generation gen) { return gen == Generation::kYoung ? 0 : 1; }

}  // namespace

SatbQueueSet::SatbQueueSet() = default;
SatbQueueSet::~SatbQueueSet() = default;

SatbQueueSet::ThreadScope::ThreadScope(SatbQueueSet& set)
    : previous_(tls_satb_buffer) {
  auto buffer = std::make_unique<Buffer>();
  Buffer* raw = buffer.get();
  {
    std::lock_guard<std::mutex> guard(set.registry_lock_);
    set.buffers_.push_back(std::move(buffer));
  }
  tls_satb_buffer = raw;
}

SatbQueueSet::ThreadScope::~ThreadScope() { tls_satb_buffer = previous_; }

uint32_t SatbQueueSet::ExchangeAndLog(std::atomic<uint32_t>& slot,
                                      uint32_t value) {
  Buffer* buffer = tls_satb_buffer;
  if (buffer == nullptr) buffer = &shared_;
  std::lock_guard<std::mutex> guard(buffer->lock);
  uint32_t old = slot.exchange(value, std::memory_order_acq_rel);
  if (old != ObjectRef::kNullIndex) {
    buffer->entries.push_back(old);
    total_logged_.fetch_add(1, std::memory_order_relaxed);
  }
  return old;
}

size_t SatbQueueSet::DrainInto(std::vector<uint32_t>& out) {
  size_t moved = 0;
  auto drain = [&](Buffer& b) {
    std::lock_guard<std::mutex> guard(b.lock);
    moved += b.entries.size();
    out.insert(out.end(), b.entries.begin(), b.entries.end());
    b.entries.clear();
  };
  drain(shared_);
  std::lock_guard<std::mutex> guard(registry_lock_);
  for (auto& b : buffers_) drain(*b);
  return moved;
}

bool SatbQueueSet::AllEmpty() {
  {
    std::lock_guard<std::mutex> guard(shared_.lock);
    if (!shared_.entries.empty()) return false;
  }
  std::lock_guard<std::mutex> guard(registry_lock_);
  for (auto& b : buffers_) {
    std::lock_guard<std::mutex> buffer_guard(b->lock);
    if (!b->entries.empty()) return false;
  }
  return true;
}

Heap::Heap(HeapConfig config)
    : config_(config),
      record_dir_(new std::atomic<ObjectRecord*>[kMaxSegments]),
      mark_dir_(new std::atomic<std::atomic<uint8_t>*>[kMaxSegments]) {
  if (config.young_capacity == 0 || config.old_capacity == 0) {
    throw InvalidArgument("heap capacities must be > 0");
  }
  for (uint32_t i = 0; i < kMaxSegments; ++i) {
    record_dir_[i].store(nullptr, std::memory_order_relaxed);
    mark_dir_[i].store(nullptr, std::memory_order_relaxed);
  }
}

Heap::~Heap() {
  for (uint32_t i = 0; i < kMaxSegments; ++i) {
    delete[] record_dir_[i].load(std::memory_order_relaxed);
    delete[] mark_dir_[i].load(std::memory_order_relaxed);
  }
}

ObjectRef Heap::Allocate(uint64_t payload_size, uint32_t slot_count,
                         Generation gen) {
  std::lock_guard<std::mutex> guard(alloc_lock_);
  const size_t g = GenIndex(gen);
  if (payload_size > capacity(gen) - used_[g]) {
    throw AllocationFailure(std::string(GenerationName(gen)) +
                            " generation exhausted: requested " +
                            std::to_string(payload_size) + " bytes, " +
                            std::to_string(capacity(gen) - used_[g]) +
                            " free");
  }
  const uint32_t index = size_.load(std::memory_order_relaxed);
  if (index >= kMaxSegments * kSegmentSize - 1) {
    throw AllocationFailure("object table exhausted");
  }
  const uint32_t seg = index >> kSegmentShift;
  if (record_dir_[seg].load(std::memory_order_relaxed) == nullptr) {
    auto* marks = new std::atomic<uint8_t>[kSegmentSize];
    for (uint32_t i = 0; i < kSegmentSize; ++i) {
      marks[i].store(0, std::memory_order_relaxed);
    }
    mark_dir_[seg].store(marks, std::memory_order_release);
    record_dir_[seg].store(new ObjectRecord[kSegmentSize],
                           std::memory_order_release);
  }

  ObjectRecord& rec = RecordAtMutable(index);
  rec.payload_size = payload_size;
  if (payload_size > 0) {
    rec.payload = std::make_unique<std::byte[]>(payload_size);  // zeroed
  }
  rec.slot_count = slot_count;
  if (slot_count > 0) {
    rec.slots = std::make_unique<std::atomic<uint32_t>[]>(slot_count);
    for (uint32_t i = 0; i < slot_count; ++i) {
      rec.slots[i].store(ObjectRef::kNullIndex, std::memory_order_relaxed);
    }
  }
  rec.generation = gen;
  rec.forward = ObjectRef::Null();
  rec.live = true;
  MarkByte(index).store(allocate_black_.load(std::memory_order_acquire) ? 1 : 0,
                        std::memory_order_relaxed);

  used_[g] += payload_size;
  live_[g] += 1;
  size_.store(index + 1, std::memory_order_release);
  return ObjectRef(index);
}

void Heap::CheckRef(ObjectRef ref, const char* what) const {
  if (ref.IsNull() || ref.index() >= table_size()) {
    throw InvalidArgument(std::string(what) + ": invalid object ref");
  }
  if (!RecordAt(ref.index()).live) {
    throw InvalidArgument(std::string(what) + ": object " +
                          std::to_string(ref.index()) + " was reclaimed");
  }
}

void Heap::SetRef(ObjectRef src, uint32_t slot, ObjectRef target) {
  CheckRef(src, "SetRef source");
  if (!target.IsNull()) CheckRef(target, "SetRef target");
  ObjectRecord& rec = RecordAtMutable(src.index());
  if (slot >= rec.slot_count) {
    throw InvalidArgument("SetRef: slot " + std::to_string(slot) +
                          " out of range for object with " +
                          std::to_string(rec.slot_count) + " slots");
  }
  auto store = [&] {
    SatbQueueSet* satb = satb_.load(std::memory_order_acquire);
    if (satb != nullptr) {
      satb->ExchangeAndLog(rec.slots[slot], target.index());
    } else {
      rec.slots[slot].store(target.index(), std::memory_order_release);
    }
  };
  if (rec.generation != Generation::kOld) {
    store();
    return;
  }
  // Old sources: the store and the remembered-set update form one step.
  const bool to_young =
      !target.IsNull() &&
      RecordAt(target.index()).generation == Generation::kYoung;
  std::lock_guard<std::mutex> guard(remset_lock_);
  store();
  if (to_young) {
    remembered_.insert({src, slot});
  } else {
    remembered_.erase({src, slot});
  }
}

ObjectRef Heap::GetRef(ObjectRef src, uint32_t slot) const {
  CheckRef(src, "GetRef source");
  const ObjectRecord& rec = RecordAt(src.index());
  if (slot >= rec.slot_count) {
    throw InvalidArgument("GetRef: slot out of range");
  }
  return rec.Slot(slot);
}

bool Heap::IsLive(ObjectRef ref) const {
  return !ref.IsNull() && ref.index() < table_size() &&
         RecordAt(ref.index()).live;
}

const ObjectRecord& Heap::Record(ObjectRef ref) const {
  if (ref.IsNull() || ref.index() >= table_size()) {
    throw InvalidArgument("Record: invalid object ref");
  }
  return RecordAt(ref.index());
}

ObjectRecord& Heap::MutableRecord(ObjectRef ref) {
  if (ref.IsNull() || ref.index() >= table_size()) {
    throw InvalidArgument("MutableRecord: invalid object ref");
  }
  return RecordAtMutable(ref.index());
}

std::span<std::byte> Heap::Payload(ObjectRef ref) {
  CheckRef(ref, "Payload");
  return RecordAtMutable(ref.index()).Payload();
}

std::span<const std::byte> Heap::Payload(ObjectRef ref) const {
  CheckRef(ref, "Payload");
  return RecordAt(ref.index()).Payload();
}

uint64_t Heap::live_count() const {
  std::lock_guard<std::mutex> guard(alloc_lock_);
  return live_[0] + live_[1];
}

uint64_t Heap::live_count(Generation gen) const {
  std::lock_guard<std::mutex> guard(alloc_lock_);
  return live_[GenIndex(gen)];
}

uint64_t Heap::used(Generation gen) const {
  std::lock_guard<std::mutex> guard(alloc_lock_);
  return used_[GenIndex(gen)];
}

uint64_t Heap::capacity(Generation gen) const {
  return gen == Generation::kYoung ? config_.young_capacity
                                   : config_.old_capacity;
}

size_t Heap::AddRoot(ObjectRef ref) {
  CheckRef(ref, "AddRoot");
  roots_.push_back(ref);
  return roots_.size() - 1;
}

void Heap::SetRoot(size_t i, ObjectRef ref) {
  if (i >= roots_.size()) throw InvalidArgument("SetRoot: index out of range");
  CheckRef(ref, "SetRoot");
  roots_[i] = ref;
}

void Heap::PopRoot() {
  if (roots_.empty()) throw InvalidArgument("PopRoot: no roots");
  roots_.pop_back();
}

void Heap::ClearRoots() { roots_.clear(); }

std::vector<RememberedSlot> Heap::RememberedSet() const {
  std::lock_guard<std::mutex> guard(remset_lock_);
  return {remembered_.begin(), remembered_.end()};
}

size_t Heap::remembered_set_size() const {
  std::lock_guard<std::mutex> guard(remset_lock_);
  return remembered_.size();
}

bool Heap::InRememberedSet(ObjectRef obj, uint32_t slot) const {
  std::lock_guard<std::mutex> guard(remset_lock_);
  return remembered_.count({obj, slot}) != 0;
}

namespace {

template <typename Fn>
void ForEachOldToYoung(const Heap& heap, Fn&& fn) {
  const uint32_t n = heap.table_size();
  for (uint32_t i = 0; i < n; ++i) {
    const ObjectRecord& rec = heap.RecordAt(i);
    if (!rec.live || rec.generation != Generation::kOld) continue;
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      ObjectRef t = rec.Slot(s);
      if (t.IsNull()) continue;
      const ObjectRecord& target = heap.RecordAt(t.index());
      if (target.live && target.generation == Generation::kYoung) {
        fn(RememberedSlot{ObjectRef(i), s});
      }
    }
  }
}

}  // namespace

void Heap::RebuildRememberedSet() {
  std::set<RememberedSlot> rebuilt;
  ForEachOldToYoung(*this, [&](RememberedSlot e) { rebuilt.insert(e); });
  std::lock_guard<std::mutex> guard(remset_lock_);
  remembered_ = std::move(rebuilt);
}

bool Heap::VerifyRememberedSet() const {
  std::set<RememberedSlot> expected;
  ForEachOldToYoung(*this, [&](RememberedSlot e) { expected.insert(e); });
  std::lock_guard<std::mutex> guard(remset_lock_);
  return expected == remembered_;
}

void Heap::ClearRememberedSet() {
  std::lock_guard<std::mutex> guard(remset_lock_);
  remembered_.clear();
}

void Heap::ClearMarks() {
  const uint32_t n = table_size();
  for (uint32_t i = 0; i < n; ++i) {
    MarkByte(i).store(0, std::memory_order_relaxed);
  }
}

void Heap::BeginCollection() {
  if (in_collection_) throw GcLabError("heap is already mid-collection");
  in_collection_ = true;
}

void Heap::EndCollection() { in_collection_ = false; }

void Heap::Reclaim(ObjectRef ref) {
  ObjectRecord& rec = MutableRecord(ref);
  if (!rec.live) return;
  std::lock_guard<std::mutex> guard(alloc_lock_);
  const size_t g = GenIndex(rec.generation);
  used_[g] -= rec.payload_size;
  live_[g] -= 1;
  rec.live = false;
  rec.payload.reset();
  rec.slots.reset();
  rec.slot_count = 0;
  rec.forward = ObjectRef::Null();
}

}  // namespace gclab
