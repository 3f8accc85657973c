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

#ifndef GCLAB_PROMOTION_H_
#define GCLAB_PROMOTION_H_

#include <chrono>
#include <cstdint>

#include "gclab/copying.h"
#include "gclab/engine_config.h"
#include "gclab/heap.h"

namespace gclab {

struct PromotionReport {
  uint64_t objects_promoted = 0;
  uint64_t bytes_promoted = 0;
  uint64_t objects_reclaimed = 0;
  std::chrono::nanoseconds mark_duration{0};
  std::chrono::nanoseconds copy_duration{0};
  std::chrono::nanoseconds fixup_duration{0};
  // Objects copied by each engine slot, and the same split by engine class.
  uint64_t objects_small_engine = 0;
  uint64_t objects_large_engine = 0;
  uint64_t objects_cpu = 0;
  uint64_t objects_device = 0;

  std::chrono::nanoseconds total_duration() const {
    return mark_duration + copy_duration + fixup_duration;
  }
};

// Minor collection. Marks the young objects reachable from the roots and
// the remembered-set targets, copies all of them into the old generation
// (payload_size >= policy.device_threshold on `large_engine`, the rest on
// `small_engine`), fixes up roots and slots, reclaims every young record and
// clears the forward fields. Throws OldGenerationOverflow, leaving the heap
// as it was, when the live young bytes do not fit.
PromotionReport Promote(Heap& heap, const PromotionPolicy& policy,
                        const EngineConfig& small_engine,
                        const EngineConfig& large_engine,
                        const EngineConfig& mark_engine);

}  // namespace gclab

#endif  // GCLAB_PROMOTION_H_
