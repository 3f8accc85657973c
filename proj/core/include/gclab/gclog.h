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

#ifndef GCLAB_GCLOG_H_
#define GCLAB_GCLOG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gclab {

// G1 unified-logging (JDK 9+) analysis. Recognized lines:
//
//   [<t>s][info][gc] GC(<id>) Pause <kind> [(<cause>)] [<b>-><a>(<c>)] <d>ms
//   [<t>s][info|debug][gc,phases] GC(<id>) <indent><Phase Name>: <d>ms
//   [<t>s][info][gc] GC(<id>) Concurrent Mark Cycle [<d>ms]
//
// Heap sizes take a B/K/M/G suffix (powers of 1024). Anything else is
// counted as skipped.

enum class GcEventKind : uint8_t {
  kYoungPause,
  kMixedPause,
  kRemarkPause,
  kCleanupPause,
  kFullPause,
  kConcurrentMarkCycle,
};

struct GcEvent {
  int64_t gc_id = 0;
  double timestamp = 0;  // seconds since JVM start
  GcEventKind kind = GcEventKind::kYoungPause;
  std::string label;  // text after "Pause ", e.g. "Young (Normal)"
  std::string cause;  // without the parentheses; may be empty
  double duration_ms = 0;
  std::optional<uint64_t> heap_before;
  std::optional<uint64_t> heap_after;
  std::optional<uint64_t> heap_capacity;

  bool is_pause() const { return kind != GcEventKind::kConcurrentMarkCycle; }
  bool operator==(const GcEvent&) const = default;
};

enum class GcPhase : uint8_t {
  kObjectCopy,
  kExtRootScanning,
  kUpdateScanRs,
  kRefProc,
  kCodeRootScanning,
  kTermination,
  kChooseCSet,
  kClearCt,
  kOther,
  kConcurrentMark,
};

struct PhaseSample {
  int64_t gc_id = 0;
  GcPhase phase = GcPhase::kOther;
  double duration_ms = 0;
  bool operator==(const PhaseSample&) const = default;
};

struct ParsedLog {
  std::vector<GcEvent> events;
  std::vector<PhaseSample> phases;
  uint64_t parsed_lines = 0;
  uint64_t skipped_lines = 0;
  uint64_t total_lines() const { return parsed_lines + skipped_lines; }
};

const char* GcEventKindName(GcEventKind kind);
const char* GcPhaseName(GcPhase phase);
// Maps a logged phase name through the alias table ("Update RS", "Scan RS"
// and "Update/Scan RS" all become kUpdateScanRs, and so on).
std::optional<GcPhase> NormalizePhaseName(std::string_view name);

ParsedLog ParseLog(std::istream& in);
ParsedLog ParseLogText(std::string_view text);

// Canonical renderings that ParseLog reads back to equal values.
std::string FormatEventLine(const GcEvent& event);
std::string FormatPhaseLine(const PhaseSample& sample, double timestamp);

struct GcSummary {
  double total_runtime_s = 0;
  double gc_time_s = 0;
  double gc_fraction_pct = 0;
  uint64_t pause_count = 0;
  std::optional<double> max_pause_ms;
  std::optional<double> avg_pause_ms;
  double concurrent_time_s = 0;
  // Share of total pause time per phase; kOther absorbs the remainder so the
  // values sum to 100 whenever there is pause time.
  std::map<GcPhase, double> phase_breakdown_pct;
  std::map<GcPhase, double> phase_time_ms;
  uint64_t skipped_lines = 0;
};

// gc_time is the sum of pause durations. `total_runtime_s` shorter than the
// last event timestamp (or absent) is replaced by that timestamp. Phase
// samples count only when their GC id belongs to a pause; concurrent mark
// samples are reported in phase_time_ms but kept out of the breakdown.
GcSummary Summarize(const ParsedLog& log,
                    std::optional<double> total_runtime_s = std::nullopt);

void WriteSummaryTable(std::ostream& out, const GcSummary& summary);
void WriteSummaryCsv(std::ostream& out, const GcSummary& summary);

}  // namespace gclab

#endif  // GCLAB_GCLOG_H_
