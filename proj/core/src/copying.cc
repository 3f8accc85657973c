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

#include "gclab/copying.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gclab/worker_gang.h"

namespace gclab {

EngineConfig CopyEngineSingle() { return EngineConfig::Serial(); }

EngineConfig CopyEngineWorkers(uint32_t threads) {
  return EngineConfig::WorkerPool(threads);
}

EngineConfig CopyEngineWorkersBlocked(uint32_t threads, uint64_t block_bytes) {
  EngineConfig cfg = EngineConfig::WorkerPool(threads);
  cfg.block_bytes = block_bytes;
  return cfg;
}

EngineConfig CopyEngineBulk(uint32_t lanes,
                            std::chrono::nanoseconds launch_latency,
                            uint32_t launchers) {
  EngineConfig cfg = EngineConfig::Frontier(lanes, launch_latency);
  cfg.workers = launchers;
  return cfg;
}

std::string CopyEngineName(const EngineConfig& engine) {
  switch (engine.kind) {
    case EngineKind::kSerial:
      return "single";
    case EngineKind::kWorkerPool:
      if (engine.block_bytes > 0) {
        return "workers_blocked(" + std::to_string(engine.workers) + "," +
               std::to_string(engine.block_bytes) + ")";
      }
      return "workers(" + std::to_string(engine.workers) + ")";
    case EngineKind::kFrontier: {
      std::string name = "bulk(" + std::to_string(engine.lanes) + "," +
                         std::to_string(engine.launch_latency.count()) + "ns";
      if (engine.workers > 1) name += ",x" + std::to_string(engine.workers);
      return name + ")";
    }
  }
  return "?";
}

namespace {

// Device-style copy: one 8-byte word per lane, `to[i] = from[i]`.
void WordCopy(std::byte* dst, const std::byte* src, uint64_t bytes) {
  const uint64_t words = bytes / sizeof(uint64_t);
  auto* to = reinterpret_cast<uint64_t*>(dst);
  const auto* from = reinterpret_cast<const uint64_t*>(src);
  for (uint64_t i = 0; i < words; ++i) {
    uint64_t w;
    std::memcpy(&w, from + i, sizeof(w));
    std::memcpy(to + i, &w, sizeof(w));
  }
  const uint64_t done = words * sizeof(uint64_t);
  if (done < bytes) std::memcpy(dst + done, src + done, bytes - done);
}

void BlockedCopy(std::byte* dst, const std::byte* src, uint64_t bytes,
                 uint64_t block) {
  for (uint64_t off = 0; off < bytes; off += block) {
    std::memcpy(dst + off, src + off, std::min(block, bytes - off));
  }
}

// Copies [0, n_objects) of fixed-size objects between flat buffers.
class FlatCopier {
 public:
  FlatCopier(const EngineConfig& engine, uint64_t object_size)
      : engine_(engine),
        object_size_(object_size),
        gang_(GangSize(engine)) {}

  void Copy(std::byte* dst, const std::byte* src, uint64_t n_objects) {
    const uint64_t bytes = n_objects * object_size_;
    switch (engine_.kind) {
      case EngineKind::kSerial:
        std::memcpy(dst, src, bytes);
        return;
      case EngineKind::kWorkerPool:
        gang_.Run([&](uint32_t id) {
          auto [b, e] = PartitionRange(n_objects, gang_.size(), id);
          const uint64_t off = b * object_size_;
          const uint64_t len = (e - b) * object_size_;
          if (engine_.block_bytes > 0) {
            BlockedCopy(dst + off, src + off, len, engine_.block_bytes);
          } else {
            std::memcpy(dst + off, src + off, len);
          }
        });
        return;
      case EngineKind::kFrontier:
        if (engine_.workers > 1) {
          // Several launchers each dispatch their own share concurrently.
          gang_.Run([&](uint32_t id) {
            auto [b, e] = PartitionRange(n_objects, gang_.size(), id);
            SpinFor(engine_.launch_latency);
            WordCopy(dst + b * object_size_, src + b * object_size_,
                     (e - b) * object_size_);
          });
        } else {
          SpinFor(engine_.launch_latency);
          gang_.Run([&](uint32_t id) {
            auto [b, e] = PartitionRange(n_objects, gang_.size(), id);
            WordCopy(dst + b * object_size_, src + b * object_size_,
                     (e - b) * object_size_);
          });
        }
        return;
    }
  }

 private:
  static uint32_t GangSize(const EngineConfig& engine) {
    switch (engine.kind) {
      case EngineKind::kSerial: return 1;
      case EngineKind::kWorkerPool: return engine.workers;
      case EngineKind::kFrontier:
        return engine.workers > 1 ? engine.workers
                                  : HostThreadsForLanes(engine.lanes);
    }
    return 1;
  }

  const EngineConfig& engine_;
  uint64_t object_size_;
  WorkerGang gang_;
};

std::chrono::nanoseconds Median(std::vector<std::chrono::nanoseconds> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

BandwidthReport CopyBench(const CopyBenchConfig& cfg) {
  cfg.engine.Validate();
  if (cfg.n_objects == 0) throw InvalidArgument("n_objects must be >= 1");
  if (cfg.object_size == 0) throw InvalidArgument("object_size must be >= 1");
  if (cfg.repetitions == 0) throw InvalidArgument("repetitions must be >= 1");
  if (cfg.n_objects > (1ull << 40) / cfg.object_size) {
    throw InvalidArgument("copy benchmark size too large");
  }

  BandwidthReport report;
  report.engine = CopyEngineName(cfg.engine);
  report.n_objects = cfg.n_objects;
  report.object_size = cfg.object_size;
  report.total_bytes = cfg.n_objects * cfg.object_size;

  std::vector<std::byte> src(report.total_bytes);
  std::vector<std::byte> dst(report.total_bytes);
  {
    std::mt19937_64 rng(cfg.seed);
    uint64_t off = 0;
    for (; off + 8 <= src.size(); off += 8) {
      const uint64_t w = rng();
      std::memcpy(src.data() + off, &w, 8);
    }
    const uint64_t w = rng();
    std::memcpy(src.data() + off, &w, src.size() - off);
  }

  FlatCopier copier(cfg.engine, cfg.object_size);
  bool all_equal = true;
  for (uint32_t rep = 0; rep <= cfg.repetitions; ++rep) {
    std::memset(dst.data(), 0, dst.size());
    Stopwatch timer;
    copier.Copy(dst.data(), src.data(), cfg.n_objects);
    const auto elapsed = timer.Elapsed();
    if (std::memcmp(dst.data(), src.data(), src.size()) != 0) {
      all_equal = false;
    }
    if (rep > 0) report.per_rep_durations.push_back(elapsed);  // 0 = warmup
  }
  if (!all_equal) {
    throw HeapCorruption("copy benchmark destination differs from source (" +
                         report.engine + ")");
  }
  report.verified = true;
  report.median_duration = Median(report.per_rep_durations);
  const double secs =
      std::max<int64_t>(1, report.median_duration.count()) * 1e-9;
  report.bandwidth = static_cast<double>(report.total_bytes) / secs;
  return report;
}

std::string BandwidthCsvHeader() {
  return "engine,n_objects,object_size,total_bytes,median_ns,bandwidth_GBps,"
         "reps,kind,threads,block_bytes,lanes,launch_latency_ns,seed,verified,"
         "rep_ns";
}

std::string BandwidthCsvRow(const CopyBenchConfig& cfg,
                            const BandwidthReport& report) {
  std::ostringstream row;
  char gbps[32];
  std::snprintf(gbps, sizeof(gbps), "%.6f", report.bandwidth_gbps());
  row << '"' << report.engine << '"' << ',' << report.n_objects << ','
      << report.object_size << ',' << report.total_bytes << ','
      << report.median_duration.count() << ',' << gbps << ','
      << cfg.repetitions << ',' << EngineKindName(cfg.engine.kind) << ','
      << cfg.engine.workers << ',' << cfg.engine.block_bytes << ','
      << cfg.engine.lanes << ',' << cfg.engine.launch_latency.count() << ','
      << cfg.seed << ',' << (report.verified ? "true" : "false") << ',';
  for (size_t i = 0; i < report.per_rep_durations.size(); ++i) {
    if (i > 0) row << ';';
    row << report.per_rep_durations[i].count();
  }
  return row.str();
}

CopyResult CopyObjects(Heap& heap, const std::vector<ObjectRef>& victims,
                       Generation dst_gen, const EngineConfig& engine) {
  engine.Validate();
  CopyResult result;
  if (victims.empty()) return result;

  std::unordered_set<uint32_t> seen;
  uint64_t bytes = 0;
  for (ObjectRef v : victims) {
    if (!heap.IsLive(v)) throw InvalidArgument("CopyObjects: victim not live");
    const ObjectRecord& rec = heap.RecordAt(v.index());
    if (rec.generation == dst_gen) {
      throw InvalidArgument("CopyObjects: victim already in target generation");
    }
    if (!rec.forward.IsNull()) {
      throw InvalidArgument("CopyObjects: victim already forwarded");
    }
    if (!seen.insert(v.index()).second) {
      throw InvalidArgument("CopyObjects: duplicate victim");
    }
    bytes += rec.payload_size;
  }
  if (bytes > heap.free(dst_gen)) {
    const std::string msg = "CopyObjects: " + std::to_string(bytes) +
                            " bytes do not fit in " + GenerationName(dst_gen) +
                            " generation (" +
                            std::to_string(heap.free(dst_gen)) + " free)";
    if (dst_gen == Generation::kOld) throw OldGenerationOverflow(msg);
    throw AllocationFailure(msg);
  }

  Stopwatch timer;
  std::vector<ObjectRef> copies;
  copies.reserve(victims.size());
  for (ObjectRef v : victims) {
    const ObjectRecord& rec = heap.RecordAt(v.index());
    copies.push_back(heap.Allocate(rec.payload_size, rec.slot_count, dst_gen));
  }

  auto copy_one = [&](size_t i, bool word_copy) {
    const ObjectRecord& from = heap.RecordAt(victims[i].index());
    ObjectRecord& to = heap.MutableRecord(copies[i]);
    if (from.payload_size > 0) {
      if (word_copy) {
        WordCopy(to.payload.get(), from.payload.get(), from.payload_size);
      } else if (engine.block_bytes > 0) {
        BlockedCopy(to.payload.get(), from.payload.get(), from.payload_size,
                    engine.block_bytes);
      } else {
        std::memcpy(to.payload.get(), from.payload.get(), from.payload_size);
      }
    }
    for (uint32_t s = 0; s < from.slot_count; ++s) {
      to.slots[s].store(from.slots[s].load(std::memory_order_relaxed),
                        std::memory_order_relaxed);
    }
  };

  const size_t n = victims.size();
  switch (engine.kind) {
    case EngineKind::kSerial:
      for (size_t i = 0; i < n; ++i) copy_one(i, false);
      break;
    case EngineKind::kWorkerPool: {
      WorkerGang gang(engine.workers);
      gang.Run([&](uint32_t id) {
        auto [b, e] = PartitionRange(n, gang.size(), id);
        for (uint64_t i = b; i < e; ++i) copy_one(i, false);
      });
      break;
    }
    case EngineKind::kFrontier: {
      const uint32_t launchers = engine.workers;
      const uint32_t threads =
          launchers > 1 ? launchers : HostThreadsForLanes(engine.lanes);
      WorkerGang gang(threads);
      if (launchers == 1) SpinFor(engine.launch_latency);
      gang.Run([&](uint32_t id) {
        if (launchers > 1) SpinFor(engine.launch_latency);
        auto [b, e] = PartitionRange(n, gang.size(), id);
        for (uint64_t i = b; i < e; ++i) copy_one(i, true);
      });
      break;
    }
  }

  for (size_t i = 0; i < n; ++i) {
    heap.MutableRecord(victims[i]).forward = copies[i];
    result.forwarding.entries.emplace_back(victims[i], copies[i]);
  }
  result.duration = timer.Elapsed();
  result.bytes = bytes;
  return result;
}

void FixupReferences(Heap& heap, const ForwardingMap& map) {
  std::unordered_map<uint32_t, uint32_t> to;
  to.reserve(map.size() * 2);
  for (auto [from, copy] : map.entries) {
    if (!heap.IsLive(from) || !heap.IsLive(copy)) {
      throw HeapCorruption("forwarding map names a reclaimed record");
    }
    to.emplace(from.index(), copy.index());
  }
  auto resolve = [&](uint32_t t) -> uint32_t {
    if (t == ObjectRef::kNullIndex) return t;
    auto it = to.find(t);
    if (it != to.end()) return it->second;
    if (!heap.IsLive(ObjectRef(t))) {
      throw HeapCorruption("slot references reclaimed record " +
                           std::to_string(t));
    }
    if (!heap.RecordAt(t).forward.IsNull()) {
      throw HeapCorruption("forwarded record " + std::to_string(t) +
                           " missing from forwarding map");
    }
    return t;
  };

  for (size_t i = 0; i < heap.roots().size(); ++i) {
    const uint32_t r = heap.roots()[i].index();
    const uint32_t moved = resolve(r);
    if (moved != r) heap.SetRoot(i, ObjectRef(moved));
  }
  const uint32_t size = heap.table_size();
  for (uint32_t i = 0; i < size; ++i) {
    ObjectRecord& rec = heap.MutableRecord(ObjectRef(i));
    if (!rec.live || to.count(i) != 0) continue;
    for (uint32_t s = 0; s < rec.slot_count; ++s) {
      const uint32_t t = rec.slots[s].load(std::memory_order_relaxed);
      const uint32_t moved = resolve(t);
      if (moved != t) rec.slots[s].store(moved, std::memory_order_relaxed);
    }
  }
  heap.RebuildRememberedSet();
}

}  // namespace gclab
