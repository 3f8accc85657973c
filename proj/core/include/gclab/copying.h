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

#ifndef GCLAB_COPYING_H_
#define GCLAB_COPYING_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gclab/engine_config.h"
#include "gclab/heap.h"

namespace gclab {

inline constexpr uint64_t kDefaultBlockBytes = 64 * 1024;
inline constexpr uint64_t kDefaultDeviceThreshold = 32 * 1024;

// Copy engines of the bandwidth benchmark, expressed as EngineConfigs.
EngineConfig CopyEngineSingle();
EngineConfig CopyEngineWorkers(uint32_t threads);
EngineConfig CopyEngineWorkersBlocked(uint32_t threads,
                                      uint64_t block_bytes = kDefaultBlockBytes);
EngineConfig CopyEngineBulk(uint32_t lanes = 384,
                            std::chrono::nanoseconds launch_latency = {},
                            uint32_t launchers = 1);

// "single", "workers(4)", "workers_blocked(4,65536)", "bulk(384,50000ns)";
// bulk engines with several launchers read "bulk(384,50000ns,x4)".
std::string CopyEngineName(const EngineConfig& engine);

struct CopyBenchConfig {
  uint64_t n_objects = 1;
  uint64_t object_size = 8;
  EngineConfig engine = CopyEngineSingle();
  uint32_t repetitions = 5;
  uint64_t seed = 0x5eed;
};

struct BandwidthReport {
  std::string engine;
  uint64_t n_objects = 0;
  uint64_t object_size = 0;
  uint64_t total_bytes = 0;
  std::chrono::nanoseconds median_duration{0};
  double bandwidth = 0;  // bytes per second
  std::vector<std::chrono::nanoseconds> per_rep_durations;
  bool verified = false;

  double bandwidth_gbps() const { return bandwidth / 1e9; }
};

// Copies n_objects * object_size bytes from a seeded source buffer once as
// warmup and then `repetitions` times, verifying the destination
// byte-for-byte after every repetition. Throws HeapCorruption if a
// destination ever differs from the source.
BandwidthReport CopyBench(const CopyBenchConfig& cfg);

// CSV header and row for bandwidth reports. The leading columns are
// engine,n_objects,object_size,total_bytes,median_ns,bandwidth_GBps,reps;
// the rest spell out the engine parameters, the seed, the verification flag
// and every repetition's duration.
std::string BandwidthCsvHeader();
std::string BandwidthCsvRow(const CopyBenchConfig& cfg,
                            const BandwidthReport& report);

// Objects of payload_size >= device_threshold go to the large-object engine.
struct PromotionPolicy {
  uint64_t device_threshold = kDefaultDeviceThreshold;
  bool RoutesToLarge(uint64_t payload_size) const {
    return payload_size >= device_threshold;
  }
};

struct ForwardingMap {
  std::vector<std::pair<ObjectRef, ObjectRef>> entries;  // from -> to
  bool empty() const { return entries.empty(); }
  size_t size() const { return entries.size(); }
};

struct CopyResult {
  ForwardingMap forwarding;
  std::chrono::nanoseconds duration{0};
  uint64_t bytes = 0;
};

// Duplicates each victim (payload and slot array, slot values verbatim) into
// `dst_gen` and installs the forward field on the original. The capacity
// check happens before any allocation, so a failing call leaves the heap
// untouched.
CopyResult CopyObjects(Heap& heap, const std::vector<ObjectRef>& victims,
                       Generation dst_gen, const EngineConfig& engine);

// Redirects every root and every slot of a live, non-forwarded record that
// points at a forwarded-from object to its copy, then rebuilds the
// remembered set. Throws HeapCorruption when a slot points at a reclaimed
// record or at a forwarded object missing from `map`.
void FixupReferences(Heap& heap, const ForwardingMap& map);

}  // namespace gclab

#endif  // GCLAB_COPYING_H_
