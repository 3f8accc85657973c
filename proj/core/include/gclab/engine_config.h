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

#ifndef GCLAB_ENGINE_CONFIG_H_
#define GCLAB_ENGINE_CONFIG_H_

#include <chrono>
#include <cstdint>
#include <string>

namespace gclab {

enum class EngineKind : uint8_t {
  kSerial,      // one thread
  kWorkerPool,  // `workers` CPU threads sharing work
  kFrontier,    // device-style: `lanes` wide dispatches, each charged latency
};

enum class MarkMode : uint8_t {
  kPlain,  // ordinary byte store, duplicates tolerated
  kCas,    // compare-exchange unmarked -> marked on every access
};

// Execution engine used by the marking and copying phases.
//
// For copying, kSerial is one memcpy per object run, kWorkerPool splits
// the work into `workers` partitions (copied in `block_bytes` chunks when
// non-zero), and kFrontier is a bulk copy issued by `workers` launcher
// threads, each paying `launch_latency` once per dispatch.
struct EngineConfig {
  EngineKind kind = EngineKind::kSerial;
  uint32_t workers = 1;
  uint32_t lanes = 384;
  std::chrono::nanoseconds launch_latency{0};
  MarkMode mark_mode = MarkMode::kPlain;
  uint64_t block_bytes = 0;

  static EngineConfig Serial(MarkMode mode = MarkMode::kPlain);
  static EngineConfig WorkerPool(uint32_t workers,
                                 MarkMode mode = MarkMode::kPlain);
  static EngineConfig Frontier(uint32_t lanes = 384,
                               std::chrono::nanoseconds latency = {},
                               MarkMode mode = MarkMode::kPlain);

  // Throws InvalidArgument on workers == 0, lanes == 0 or negative latency.
  void Validate() const;
  bool is_device() const { return kind == EngineKind::kFrontier; }
};

const char* EngineKindName(EngineKind kind);
const char* MarkModeName(MarkMode mode);
EngineKind ParseEngineKind(const std::string& name);
MarkMode ParseMarkMode(const std::string& name);

// Host threads a frontier/bulk engine may use for `lanes` logical lanes.
uint32_t HostThreadsForLanes(uint32_t lanes);

}  // namespace gclab

#endif  // GCLAB_ENGINE_CONFIG_H_
