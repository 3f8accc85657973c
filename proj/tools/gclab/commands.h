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


#ifndef GCLAB_TOOLS_COMMANDS_H_
#define GCLAB_TOOLS_COMMANDS_H_

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gclab/engine_config.h"

namespace gclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 3;

struct CopyBandwidthOptions {
  std::vector<uint64_t> n_objects;
  uint64_t object_size = 8;
  std::vector<EngineConfig> engines;
  uint32_t reps = 5;
  uint64_t seed = 1;
};

struct MarkOptions {
  std::vector<uint64_t> n_objects;
  std::vector<double> degrees;
  std::vector<EngineConfig> engines;
  std::vector<MarkMode> modes;
  uint32_t reps = 5;
  uint64_t seed = 1;
  uint64_t payload_size = 16;
  // 0 selects max(1, n / 1000).
  uint64_t root_count = 0;
  bool verify = false;
};

struct PromoteOptions {
  std::vector<uint64_t> total_bytes;
  std::vector<uint64_t> object_sizes;
  std::vector<std::string> collectors;
  uint64_t young_capacity = 32ull << 20;
  // 0 sizes the old space to hold the whole list.
  uint64_t old_capacity = 0;
  uint64_t threshold = 0;
  std::chrono::nanoseconds bulk_latency = std::chrono::microseconds(50);
  uint32_t reps = 3;
};

struct ConcurrentMarkOptions {
  std::vector<uint64_t> n_objects;
  std::vector<double> degrees;
  EngineConfig engine;
  std::vector<uint64_t> mutators;
  std::vector<uint64_t> mutations;
  uint64_t seed = 1;
  uint64_t seeds = 1;
};

struct AnalyzeOptions {
  std::string path;  // "-" reads standard input
  std::optional<double> total_runtime_s;
};

// Each command writes CSV rows to `csv` and diagnostics to `log` and returns
// an exit code. Argument problems throw FlagError or InvalidArgument.
int RunCopyBandwidth(const CopyBandwidthOptions& opts, std::ostream& csv,
                     std::ostream& log);
int RunMark(const MarkOptions& opts, std::ostream& csv, std::ostream& log);
int RunPromote(const PromoteOptions& opts, std::ostream& csv, std::ostream& log);
int RunConcurrentMark(const ConcurrentMarkOptions& opts, std::ostream& csv,
                      std::ostream& log);
// Prints the summary table to `out` and the CSV sections to `csv` (which
// may be the same stream).
int RunAnalyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& csv,
               std::ostream& log);

std::string MarkEngineName(const EngineConfig& cfg);

// Columns whose values depend on timing or thread scheduling. Every other
// column is a pure function of the flags.
bool IsVolatileColumn(std::string_view name);

// Copy of a CSV document with the volatile columns removed; the header row
// names the columns.
std::string StripVolatileColumns(const std::string& csv);

}  // namespace gclab::cli

#endif  // GCLAB_TOOLS_COMMANDS_H_
