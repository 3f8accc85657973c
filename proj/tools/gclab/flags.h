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


#ifndef GCLAB_TOOLS_FLAGS_H_
#define GCLAB_TOOLS_FLAGS_H_

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gclab/engine_config.h"

namespace gclab::cli {

// Flag value errors; the CLI maps them to exit code 1.
class FlagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "4096", "8K" (x1024), "16M", "1G", "1e5", "2.5e3". Must be integral.
uint64_t ParseCount(std::string_view text);

// Comma-separated items, each a count or a range:
//   A:B:xK   geometric, A, A*K, ... up to and including B when reached
//   A:B:+K   arithmetic
// Duplicates are kept in order of appearance.
std::vector<uint64_t> ParseCountGrid(std::string_view text);

// Comma-separated decimal numbers (avg degree lists).
std::vector<double> ParseDoubleList(std::string_view text);

// "0", "50us", "50000ns", "1.5ms", "2s". A bare number is nanoseconds.
std::chrono::nanoseconds ParseDuration(std::string_view text);

// Comma-separated words, whitespace trimmed, empties rejected.
std::vector<std::string> SplitList(std::string_view text);

// Marking engine spec: serial | worker_pool[:T] | workers[:T] |
// frontier[:lanes[:latency]]. `default_workers` applies to a bare
// worker_pool.
EngineConfig ParseMarkEngine(std::string_view text, uint32_t default_workers);

// Copy engine spec, colon or call syntax:
//   single
//   workers:T                    workers(T)
//   workers_blocked:T[:B]        workers_blocked(T,B)
//   bulk[:lanes[:latency[:xK]]]  bulk(lanes,latency[,xK])
// Text produced by CopyEngineName parses back to the same engine.
EngineConfig ParseCopyEngine(std::string_view text);

// The five default copy-bandwidth cases.
std::vector<EngineConfig> DefaultCopyEngines();

// Collector spec for the promotion benchmark: cpuK or bulkK.
struct Collector {
  std::string name;
  EngineConfig small_engine;
  EngineConfig large_engine;
  EngineConfig mark_engine;
};
Collector ParseCollector(std::string_view text,
                         std::chrono::nanoseconds bulk_latency);

std::string FormatDurationNs(std::chrono::nanoseconds d);

}  // namespace gclab::cli

#endif  // GCLAB_TOOLS_FLAGS_H_
