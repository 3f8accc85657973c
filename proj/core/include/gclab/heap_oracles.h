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

#ifndef GCLAB_HEAP_ORACLES_H_
#define GCLAB_HEAP_ORACLES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gclab/heap.h"

namespace gclab {

// Plain reachability used to check the marking engines. Deliberately shares
// no code with them: an unordered_set and a recursive-free DFS.
std::vector<ObjectRef> ReachableOracle(const Heap& heap,
                                       const std::vector<ObjectRef>& roots);

// Reachable set as a dense 0/1 vector indexed by table position.
std::vector<uint8_t> ReachableBitmap(const Heap& heap,
                                     const std::vector<ObjectRef>& roots);

// Number of BFS levels from `roots` (0 when no root is live).
uint32_t BfsLevelCount(const Heap& heap, const std::vector<ObjectRef>& roots);

// Identity-free encoding of the root-reachable graph: BFS from the roots,
// slots in order, objects labeled by discovery order, payload bytes inline.
// Two heaps encode equal iff their live graphs are isomorphic under that
// labeling.
std::string CanonicalSerialize(const Heap& heap);

// Slots or roots that point at a missing or reclaimed record, counted over
// live records only.
uint64_t CountDanglingReferences(const Heap& heap);

}  // namespace gclab

#endif  // GCLAB_HEAP_ORACLES_H_
