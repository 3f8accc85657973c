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


#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gclab/gclog.h"
#include "test_support.h"

namespace gclab {
namespace {

constexpr uint64_t kMiB = 1 << 20;

TEST(GcLogParseTest, YoungPauseLine) {
  const ParsedLog log = ParseLogText(
      "[2.345s][info][gc] GC(7) Pause Young (Normal) (G1 Evacuation Pause) "
      "512M->128M(1024M) 15.234ms");
  ASSERT_EQ(log.events.size(), 1u);
  const GcEvent& e = log.events[0];
  EXPECT_EQ(e.gc_id, 7);
  EXPECT_DOUBLE_EQ(e.timestamp, 2.345);
  EXPECT_EQ(e.kind, GcEventKind::kYoungPause);
  EXPECT_DOUBLE_EQ(e.duration_ms, 15.234);
  EXPECT_EQ(e.heap_before, 512 * kMiB);
  EXPECT_EQ(e.heap_after, 128 * kMiB);
  EXPECT_EQ(e.heap_capacity, 1024 * kMiB);
  EXPECT_EQ(e.label, "Young (Normal)");
  EXPECT_EQ(e.cause, "G1 Evacuation Pause");
  EXPECT_EQ(log.parsed_lines, 1u);
  EXPECT_EQ(log.skipped_lines, 0u);
}

TEST(GcLogParseTest, PhaseLine) {
  const ParsedLog log = ParseLogText("[2.345s][info][gc,phases] GC(7)   Object Copy: 10.1ms");
  ASSERT_EQ(log.phases.size(), 1u);
  EXPECT_EQ(log.phases[0], (PhaseSample{7, GcPhase::kObjectCopy, 10.1}));
}

TEST(GcLogParseTest, RandomTextSkipped) {
  const ParsedLog log = ParseLogText("random text");
  EXPECT_TRUE(log.events.empty());
  EXPECT_EQ(log.skipped_lines, 1u);
}

TEST(GcLogParseTest, EmptyInput) {
  const ParsedLog log = ParseLogText("");
  EXPECT_EQ(log.total_lines(), 0u);
  std::istringstream in("");
  EXPECT_EQ(ParseLog(in).total_lines(), 0u);
}

TEST(GcLogParseTest, OtherPauseKinds) {
  const ParsedLog log = ParseLogText(
      "[1.0s][info][gc] GC(1) Pause Young (Mixed) (G1 Evacuation Pause) 2G->1G(4G) 3ms\n"
      "[2.0s][info][gc] GC(2) Pause Remark 100M->90M(1G) 4.5ms\n"
      "[3.0s][info][gc] GC(2) Pause Cleanup 90M->90M(1G) 0.2ms\n"
      "[4.0s][info][gc] GC(3) Pause Full (System.gc()) 512K->256K(1024K) 80ms\n"
      "[5.0s][info][gc] GC(4) Pause Young (Concurrent Start) (Metadata GC Threshold) 7ms\n"
      "[6.0s][info][gc] GC(5) Pause Young (G1 Humongous Allocation) 1ms\n");
  ASSERT_EQ(log.events.size(), 6u);
  EXPECT_EQ(log.events[0].kind, GcEventKind::kMixedPause);
  EXPECT_EQ(log.events[0].heap_before, 2048 * kMiB);
  EXPECT_EQ(log.events[1].kind, GcEventKind::kRemarkPause);
  EXPECT_EQ(log.events[2].kind, GcEventKind::kCleanupPause);
  EXPECT_EQ(log.events[3].kind, GcEventKind::kFullPause);
  EXPECT_EQ(log.events[3].cause, "System.gc()");
  EXPECT_EQ(log.events[3].heap_before, 512u * 1024);
  EXPECT_EQ(log.events[4].kind, GcEventKind::kYoungPause);
  EXPECT_FALSE(log.events[4].heap_before.has_value());
  EXPECT_EQ(log.events[5].cause, "G1 Humongous Allocation");
  EXPECT_EQ(log.events[5].label, "Young");
}

TEST(GcLogParseTest, ConcurrentCycleLines) {
  const ParsedLog log = ParseLogText(
      "[1.0s][info][gc] GC(3) Concurrent Mark Cycle\n"
      "[1.5s][info][gc] GC(3) Concurrent Mark Cycle 500.5ms\n");
  EXPECT_EQ(log.parsed_lines, 2u);
  ASSERT_EQ(log.events.size(), 1u);
  EXPECT_EQ(log.events[0].kind, GcEventKind::kConcurrentMarkCycle);
  EXPECT_FALSE(log.events[0].is_pause());
  EXPECT_DOUBLE_EQ(log.events[0].duration_ms, 500.5);
}

TEST(GcLogParseTest, MalformedLinesSkipped) {
  const char* bad[] = {
      "[1.0s][info][gc] GC(1) Pause Young (Normal) 1.0",
      "[1.0s][info][gc] GC(1) Pause Young (Normal (x) 1.0ms",
      "[1.0s][info][gc] GC() Pause Young 1ms",
      "[1.0s][warn][gc] GC(1) Pause Young 1ms",
      "[1.0s][info][gc,heap] GC(1) Pause Young 1ms",
      "[1.0s][info][gc] GC(1) Pause Young 512M->(1G) 1ms",
      "[1.0s][info][gc] GC(1) Pause Young 1ms trailing",
      "[1.0s][info][gc] GC(1) Pause Young -1ms",
      "[1.0s][info][gc] GC(1) Pause Young infms",
      "[1.0s][info][gc,phases] GC(1)   Made Up Phase: 2ms",
      "[1.0s][info][gc,phases] GC(1)   Object Copy 2ms",
      "[1.0s][info][gc] GC(1) Pause Young 5X->1M(2M) 1ms",
      "[1.0s][debug][gc] GC(1) Pause Young 1ms",
  };
  for (const char* line : bad) {
    const ParsedLog log = ParseLogText(line);
    EXPECT_EQ(log.skipped_lines, 1u) << line;
    EXPECT_TRUE(log.events.empty() && log.phases.empty()) << line;
  }
}

TEST(GcLogParseTest, PhaseAliases) {
  EXPECT_EQ(NormalizePhaseName("Update RS"), GcPhase::kUpdateScanRs);
  EXPECT_EQ(NormalizePhaseName("Scan RS"), GcPhase::kUpdateScanRs);
  EXPECT_EQ(NormalizePhaseName("Update/Scan RS"), GcPhase::kUpdateScanRs);
  EXPECT_EQ(NormalizePhaseName("RS"), GcPhase::kUpdateScanRs);
  EXPECT_EQ(NormalizePhaseName("Clear CT"), GcPhase::kClearCt);
  EXPECT_EQ(NormalizePhaseName("CT"), GcPhase::kClearCt);
  EXPECT_EQ(NormalizePhaseName("Ext Root Scan"), GcPhase::kExtRootScanning);
  EXPECT_EQ(NormalizePhaseName("Reference Processing"), GcPhase::kRefProc);
  EXPECT_EQ(NormalizePhaseName("Choose Collection Set"), GcPhase::kChooseCSet);
  EXPECT_EQ(NormalizePhaseName("Concurrent Mark"), GcPhase::kConcurrentMark);
  EXPECT_FALSE(NormalizePhaseName("object copy").has_value());
  const ParsedLog log = ParseLogText(
      "[1s][debug][gc,phases] GC(1)     Clear CT: 0.5ms\n"
      "[1s][info][gc,phases] GC(1)   Update RS: 1.5ms\r\n");
  ASSERT_EQ(log.phases.size(), 2u);
  EXPECT_EQ(log.phases[0].phase, GcPhase::kClearCt);
  EXPECT_EQ(log.phases[1].phase, GcPhase::kUpdateScanRs);
}

TEST(GcLogParseTest, EventsOrderedByTimestamp) {
  const ParsedLog log = ParseLogText(
      "[3.0s][info][gc] GC(3) Pause Remark 1ms\n"
      "[1.0s][info][gc] GC(1) Pause Remark 1ms\n"
      "[2.0s][info][gc] GC(2) Pause Remark 1ms\n");
  ASSERT_EQ(log.events.size(), 3u);
  EXPECT_EQ(log.events[0].gc_id, 1);
  EXPECT_EQ(log.events[2].gc_id, 3);
}

GcEvent Pause(int64_t id, double ts, double ms) {
  GcEvent e;
  e.gc_id = id;
  e.timestamp = ts;
  e.duration_ms = ms;
  e.label = "Young (Normal)";
  return e;
}

TEST(GcSummaryTest, DirectArithmetic) {
  ParsedLog log;
  log.events = {Pause(1, 0.1, 10), Pause(2, 0.2, 20), Pause(3, 0.3, 30)};
  const GcSummary s = Summarize(log, 1.0);
  EXPECT_EQ(s.pause_count, 3u);
  EXPECT_DOUBLE_EQ(*s.max_pause_ms, 30);
  EXPECT_DOUBLE_EQ(*s.avg_pause_ms, 20);
  EXPECT_NEAR(s.gc_fraction_pct, 6.0, 1e-12);
  EXPECT_NEAR(s.gc_time_s, 0.06, 1e-12);
}

TEST(GcSummaryTest, RuntimeShorterThanLastEventUsesTimestamp) {
  ParsedLog log;
  log.events = {Pause(1, 2.0, 10)};
  EXPECT_DOUBLE_EQ(Summarize(log, 0.5).total_runtime_s, 2.0);
  EXPECT_DOUBLE_EQ(Summarize(log).total_runtime_s, 2.0);
}

TEST(GcSummaryTest, NoEvents) {
  const GcSummary s = Summarize(ParsedLog{});
  EXPECT_EQ(s.gc_fraction_pct, 0);
  EXPECT_FALSE(s.max_pause_ms.has_value());
  EXPECT_FALSE(s.avg_pause_ms.has_value());
  EXPECT_TRUE(s.phase_breakdown_pct.empty());
}

TEST(GcSummaryTest, BreakdownResidualGoesToOther) {
  ParsedLog log;
  log.events = {Pause(1, 1, 10), Pause(2, 2, 30)};
  log.phases = {{1, GcPhase::kObjectCopy, 6}, {2, GcPhase::kObjectCopy, 14},
                {2, GcPhase::kTermination, 4}, {2, GcPhase::kOther, 99},
                {9, GcPhase::kObjectCopy, 1000}};  // id 9 has no pause
  const GcSummary s = Summarize(log);
  EXPECT_NEAR(s.phase_breakdown_pct.at(GcPhase::kObjectCopy), 50, 1e-9);
  EXPECT_NEAR(s.phase_breakdown_pct.at(GcPhase::kTermination), 10, 1e-9);
  EXPECT_NEAR(s.phase_breakdown_pct.at(GcPhase::kOther), 40, 1e-9);
}

TEST(GcSummaryTest, ConcurrentMarkExcludedFromPauses) {
  ParsedLog log;
  GcEvent cycle = Pause(4, 5, 700);
  cycle.kind = GcEventKind::kConcurrentMarkCycle;
  log.events = {Pause(1, 1, 10), cycle};
  log.phases = {{4, GcPhase::kConcurrentMark, 650}};
  const GcSummary s = Summarize(log);
  EXPECT_EQ(s.pause_count, 1u);
  EXPECT_DOUBLE_EQ(*s.max_pause_ms, 10);
  EXPECT_NEAR(s.concurrent_time_s, 0.7, 1e-12);
  EXPECT_EQ(s.phase_breakdown_pct.count(GcPhase::kConcurrentMark), 0u);
  EXPECT_DOUBLE_EQ(s.phase_time_ms.at(GcPhase::kConcurrentMark), 650);
}

std::string ReadFixture() {
  std::ifstream in(testing::FixturePath("g1_fixture.log"));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double Golden(const std::map<std::string, std::string>& g, const std::string& key) {
  return std::stod(g.at(key));
}

TEST(GcLogGoldenTest, FixtureMatchesGoldenValues) {
  const auto golden = testing::ReadGolden(testing::FixturePath("g1_golden.txt"));
  const std::string text = ReadFixture();
  const ParsedLog log = ParseLogText(text);
  EXPECT_GE(log.total_lines(), 200u);
  EXPECT_EQ(log.total_lines(), Golden(golden, "lines"));
  EXPECT_EQ(log.skipped_lines, Golden(golden, "skipped_lines"));
  const GcSummary s = Summarize(log);
  EXPECT_EQ(s.pause_count, Golden(golden, "pause_count"));
  EXPECT_NEAR(s.total_runtime_s, Golden(golden, "total_runtime_s"), 1e-9);
  EXPECT_NEAR(s.gc_time_s * 1000, Golden(golden, "gc_time_ms"), 0.01);
  EXPECT_NEAR(*s.max_pause_ms, Golden(golden, "max_pause_ms"), 0.01);
  EXPECT_NEAR(*s.avg_pause_ms, Golden(golden, "avg_pause_ms"), 0.01);
  EXPECT_NEAR(s.gc_fraction_pct, Golden(golden, "gc_fraction_pct"), 0.1);
  EXPECT_NEAR(s.concurrent_time_s * 1000, Golden(golden, "concurrent_time_ms"), 0.01);
  double sum = 0;
  for (const auto& [phase, pct] : s.phase_breakdown_pct) {
    EXPECT_NEAR(pct, Golden(golden, std::string("phase_pct ") + GcPhaseName(phase)), 0.1)
        << GcPhaseName(phase);
    sum += pct;
  }
  EXPECT_EQ(s.phase_breakdown_pct.size(), 9u);
  EXPECT_NEAR(sum, 100, 0.1);

  std::istringstream stream(text);
  const ParsedLog streamed = ParseLog(stream);
  EXPECT_EQ(streamed.events, log.events);
  EXPECT_EQ(streamed.phases, log.phases);
}

TEST(GcLogGoldenTest, PhasesWithinParentPause) {
  const ParsedLog log = ParseLogText(ReadFixture());
  std::map<int64_t, double> pause_ms, phase_ms;
  for (const GcEvent& e : log.events) {
    if (e.is_pause()) pause_ms[e.gc_id] += e.duration_ms;
  }
  for (const PhaseSample& p : log.phases) {
    if (p.phase != GcPhase::kOther) phase_ms[p.gc_id] += p.duration_ms;
  }
  for (const auto& [id, ms] : phase_ms) {
    ASSERT_TRUE(pause_ms.count(id)) << id;
    EXPECT_LE(ms, pause_ms[id] * 1.05) << "GC(" << id << ")";
  }
}

TEST(GcLogRoundTripTest, FixtureEvents) {
  const ParsedLog log = ParseLogText(ReadFixture());
  std::string canonical;
  for (const GcEvent& e : log.events) canonical += FormatEventLine(e) + "\n";
  for (const PhaseSample& p : log.phases) canonical += FormatPhaseLine(p, 1.5) + "\n";
  const ParsedLog again = ParseLogText(canonical);
  EXPECT_EQ(again.skipped_lines, 0u);
  EXPECT_EQ(again.events, log.events);
  EXPECT_EQ(again.phases, log.phases);
}

TEST(GcLogRoundTripTest, RandomEvents) {
  std::mt19937_64 rng(77);
  const GcEventKind kinds[] = {GcEventKind::kYoungPause, GcEventKind::kMixedPause,
                               GcEventKind::kRemarkPause, GcEventKind::kCleanupPause,
                               GcEventKind::kFullPause, GcEventKind::kConcurrentMarkCycle};
  const char* labels[] = {"Young (Normal)", "Young (Mixed)", "Remark", "Cleanup", "Full",
                          "Concurrent Mark Cycle"};
  std::vector<GcEvent> events;
  std::string text;
  for (int i = 0; i < 2000; ++i) {
    GcEvent e;
    const int k = rng() % 6;
    e.kind = kinds[k];
    e.label = labels[k];
    e.gc_id = i;
    e.timestamp = i * 0.25 + (rng() % 1000) / 8192.0;
    e.duration_ms = (rng() % 1000000) / 1024.0;
    if (e.kind != GcEventKind::kConcurrentMarkCycle) {
      if (rng() % 2) e.cause = "G1 Evacuation Pause";
      if (rng() % 2) {
        e.heap_before = (rng() % 4096) << (10 * (rng() % 3));
        e.heap_after = (rng() % 4096) << 20;
        e.heap_capacity = 4096ull << 20;
      }
    }
    events.push_back(e);
    text += FormatEventLine(e) + "\n";
  }
  const ParsedLog log = ParseLogText(text);
  ASSERT_EQ(log.skipped_lines, 0u);
  EXPECT_EQ(log.events, events);
}

TEST(GcLogRobustnessTest, ArbitraryBytesNeverAbort) {
  std::mt19937_64 rng(5);
  const std::string fixture = ReadFixture();
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    if (trial % 3 == 0) {
      const size_t len = rng() % 4096;
      for (size_t i = 0; i < len; ++i) text += static_cast<char>(rng());
    } else {
      // Fixture with random byte damage.
      text = fixture.substr(0, 4000 + rng() % 4000);
      for (int k = 0; k < 40; ++k) text[rng() % text.size()] = static_cast<char>(rng());
    }
    const ParsedLog log = ParseLogText(text);
    const size_t lines = std::count(text.begin(), text.end(), '\n') +
                         (!text.empty() && text.back() != '\n' ? 1 : 0);
    ASSERT_EQ(log.total_lines(), lines) << "trial " << trial;
    const GcSummary s = Summarize(log);
    (void)s;
  }
  // One enormous line.
  const ParsedLog huge = ParseLogText(std::string(1 << 20, '('));
  EXPECT_EQ(huge.skipped_lines, 1u);
}

TEST(GcSummaryOutputTest, CsvSections) {
  ParsedLog log;
  log.events = {Pause(1, 1, 10)};
  log.phases = {{1, GcPhase::kObjectCopy, 5}};
  std::ostringstream csv, table;
  WriteSummaryCsv(csv, Summarize(log));
  WriteSummaryTable(table, Summarize(log));
  const std::string out = csv.str();
  EXPECT_EQ(out.rfind("metric,value\n", 0), 0u);
  EXPECT_NE(out.find("\nphase,percent\n"), std::string::npos);
  EXPECT_NE(out.find("Object Copy,50.000000"), std::string::npos);
  EXPECT_NE(out.find("Other,50.000000"), std::string::npos);
  EXPECT_NE(table.str().find("max pause"), std::string::npos);

  std::ostringstream empty;
  WriteSummaryCsv(empty, Summarize(ParsedLog{}));
  EXPECT_NE(empty.str().find("max_pause_ms,\n"), std::string::npos);
}

}  // namespace
}  // namespace gclab
