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

#ifndef GCLAB_GRAPH_DUMP_H_
#define GCLAB_GRAPH_DUMP_H_

#include <iosfwd>
#include <string>

#include "gclab/workload.h"

namespace gclab {

// Versioned little-endian binary dump of a generated graph:
//
//   "GCLGRAPH"           8-byte magic
//   u32 version          currently 1
//   u64 n_objects
//   f64 avg_out_degree
//   u64 seed
//   u64 root_count
//   u64 payload_size
//   u64 edge_count
//   u64 offsets[n + 1]   CSR row starts
//   u32 targets[edge_count]
struct GraphDump {
  GraphGenConfig config;
  GraphShape shape;
};

inline constexpr char kGraphDumpMagic[8] = {'G', 'C', 'L', 'G',
                                            'R', 'A', 'P', 'H'};
inline constexpr uint32_t kGraphDumpVersion = 1;

void WriteGraphDump(std::ostream& out, const GraphDump& dump);
GraphDump ReadGraphDump(std::istream& in);
void WriteGraphDumpFile(const std::string& path, const GraphDump& dump);
GraphDump ReadGraphDumpFile(const std::string& path);

}  // namespace gclab

#endif  // GCLAB_GRAPH_DUMP_H_
