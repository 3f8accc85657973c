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

#include "gclab/heap_oracles.h"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace gclab {

std::vector<ObjectRef> ReachableOracle(const Heap& heap,
                                       const std::vector<ObjectRef>& roots) {
  std::unordered_set<uint32_t> seen;
  std::vector<uint32_t> stack;
  for (ObjectRef r : roots) {
    if (heap.IsLive(r) && seen.insert(r.index()).second) {
      stack.push_back(r.index());
    }
  }
  while (!stack.empty()) {
    const uint32_t cur = stack.back();
    stack.pop_back();
    const ObjectRecord& rec = heap.Record(ObjectRef(cur));
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      ObjectRef t = rec.Slot(s);
      if (heap.IsLive(t) && seen.insert(t.index()).second) {
        stack.push_back(t.index());
      }
    }
  }
  std::vector<ObjectRef> out;
  out.reserve(seen.size());
  for (uint32_t i : seen) out.emplace_back(i);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint8_t> ReachableBitmap(const Heap& heap,
                                     const std::vector<ObjectRef>& roots) {
  std::vector<uint8_t> bits(heap.table_size(), 0);
  for (ObjectRef r : ReachableOracle(heap, roots)) bits[r.index()] = 1;
  return bits;
}

uint32_t BfsLevelCount(const Heap& heap, const std::vector<ObjectRef>& roots) {
  std::unordered_map<uint32_t, uint32_t> depth;
  std::deque<uint32_t> queue;
  for (ObjectRef r : roots) {
    if (heap.IsLive(r) && depth.emplace(r.index(), 1).second) {
      queue.push_back(r.index());
    }
  }
  uint32_t levels = 0;
  while (!queue.empty()) {
    const uint32_t cur = queue.front();
    queue.pop_front();
    const uint32_t d = depth[cur];
    levels = std::max(levels, d);
    const ObjectRecord& rec = heap.Record(ObjectRef(cur));
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      ObjectRef t = rec.Slot(s);
      if (heap.IsLive(t) && depth.emplace(t.index(), d + 1).second) {
        queue.push_back(t.index());
      }
    }
  }
  return levels;
}

namespace {

void AppendU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

}  // namespace

std::string CanonicalSerialize(const Heap& heap) {
  std::unordered_map<uint32_t, uint64_t> label;
  std::vector<uint32_t> order;
  auto discover = [&](ObjectRef r) -> uint64_t {
    if (r.IsNull()) return ~0ull;
    auto [it, inserted] = label.emplace(r.index(), order.size());
    if (inserted) order.push_back(r.index());
    return it->second;
  };

  std::string out;
  AppendU64(out, heap.roots().size());
  for (ObjectRef r : heap.roots()) AppendU64(out, discover(r));
  for (size_t next = 0; next < order.size(); ++next) {
    const ObjectRecord& rec = heap.Record(ObjectRef(order[next]));
    AppendU64(out, next);
    AppendU64(out, rec.payload_size);
    if (rec.payload_size > 0) {
      out.append(reinterpret_cast<const char*>(rec.payload.get()),
                 rec.payload_size);
    }
    AppendU64(out, rec.slot_count);
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      AppendU64(out, discover(rec.Slot(s)));
    }
  }
  return out;
}

uint64_t CountDanglingReferences(const Heap& heap) {
  uint64_t dangling = 0;
  for (ObjectRef r : heap.roots()) {
    if (!heap.IsLive(r)) ++dangling;
  }
  const uint32_t n = heap.table_size();
  for (uint32_t i = 0; i < n; ++i) {
    const ObjectRecord& rec = heap.RecordAt(i);
    if (!rec.live) continue;
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      ObjectRef t = rec.Slot(s);
      if (!t.IsNull() && !heap.IsLive(t)) ++dangling;
    }
  }
  return dangling;
}

}  // namespace gclab
