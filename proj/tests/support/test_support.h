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


#ifndef GCLAB_TESTS_SUPPORT_TEST_SUPPORT_H_
#define GCLAB_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gclab/heap.h"
#include "gclab/workload.h"

namespace gclab::testing {

// Test-side oracles. They share no code with the library: reachability is a
// fixed-point sweep, levels come from a plain queue over adjacency lists.

// Reachable flags from the first `root_count` vertices of a CSR shape.
std::vector<uint8_t> ShapeReachable(const GraphShape& shape, uint64_t root_count);
// BFS level count of the same.
uint32_t ShapeLevels(const GraphShape& shape, uint64_t root_count);

// Fixed-point reachability over heap records (repeat full sweeps until no
// new object is flagged). Quadratic in the worst case; fine for test sizes.
std::vector<uint8_t> SweepReachable(const Heap& heap,
                                    const std::vector<ObjectRef>& roots);

// Young objects a minor collection must keep: reachable from the roots and
// from every old->young slot found by scanning all live old objects.
std::vector<uint8_t> MinorLiveYoung(const Heap& heap);

// Independent canonical encoding of the root-reachable graph.
std::string Canonical(const Heap& heap);

struct RandomHeapConfig {
  uint64_t seed = 0;
  uint32_t young_objects = 40;
  uint32_t old_objects = 20;
  uint32_t max_slots = 3;
  uint32_t max_payload = 96;
  uint32_t roots = 4;
  double edge_probability = 0.6;
};

// Two-generation heap with random payload bytes, random edges (old->young
// included), random roots, and some unreachable garbage.
std::unique_ptr<Heap> MakeRandomHeap(const RandomHeapConfig& cfg);

// Reads "key<TAB>value" lines, skipping '#' comments.
std::map<std::string, std::string> ReadGolden(const std::string& path);

std::string FixturePath(const std::string& name);

}  // namespace gclab::testing

#endif  // GCLAB_TESTS_SUPPORT_TEST_SUPPORT_H_
