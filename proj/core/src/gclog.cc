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

#include "gclab/gclog.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace gclab {

const char* GcEventKindName(GcEventKind kind) {
  switch (kind) {
    case GcEventKind::kYoungPause: return "young_pause";
    case GcEventKind::kMixedPause: return "mixed_pause";
    case GcEventKind::kRemarkPause: return "remark_pause";
    case GcEventKind::kCleanupPause: return "cleanup_pause";
    case GcEventKind::kFullPause: return "full_pause";
    case GcEventKind::kConcurrentMarkCycle: return "concurrent_mark_cycle";
  }
  return "?";
}

const char* GcPhaseName(GcPhase phase) {
  switch (phase) {
    case GcPhase::kObjectCopy: return "Object Copy";
    case GcPhase::kExtRootScanning: return "Ext Root Scanning";
    case GcPhase::kUpdateScanRs: return "Update/Scan RS";
    case GcPhase::kRefProc: return "Ref Proc";
    case GcPhase::kCodeRootScanning: return "Code Root Scanning";
    case GcPhase::kTermination: return "Termination";
    case GcPhase::kChooseCSet: return "Choose CSet";
    case GcPhase::kClearCt: return "Clear CT";
    case GcPhase::kOther: return "Other";
    case GcPhase::kConcurrentMark: return "Concurrent Mark";
  }
  return "?";
}

std::optional<GcPhase> NormalizePhaseName(std::string_view name) {
  struct Alias {
    std::string_view name;
    GcPhase phase;
  };
  static constexpr Alias kAliases[] = {
      {"Object Copy", GcPhase::kObjectCopy},
      {"Ext Root Scanning", GcPhase::kExtRootScanning},
      {"Ext Root Scan", GcPhase::kExtRootScanning},
      {"Update/Scan RS", GcPhase::kUpdateScanRs},
      {"Update RS", GcPhase::kUpdateScanRs},
      {"Scan RS", GcPhase::kUpdateScanRs},
      {"RS", GcPhase::kUpdateScanRs},
      {"Ref Proc", GcPhase::kRefProc},
      {"Reference Processing", GcPhase::kRefProc},
      {"Code Root Scanning", GcPhase::kCodeRootScanning},
      {"Code Root Scan", GcPhase::kCodeRootScanning},
      {"Termination", GcPhase::kTermination},
      {"Choose CSet", GcPhase::kChooseCSet},
      {"Choose Collection Set", GcPhase::kChooseCSet},
      {"Clear CT", GcPhase::kClearCt},
      {"CT", GcPhase::kClearCt},
      {"Clear Card Table", GcPhase::kClearCt},
      {"Other", GcPhase::kOther},
      {"Concurrent Mark", GcPhase::kConcurrentMark},
  };
  for (const Alias& a : kAliases) {
    if (a.name == name) return a.phase;
  }
  return std::nullopt;
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool Eat(std::string_view lit) {
    if (s_.substr(0, lit.size()) != lit) return false;
    s_.remove_prefix(lit.size());
    return true;
  }
  bool AtEnd() const { return s_.empty(); }
  std::string_view rest() const { return s_; }
  size_t SkipSpaces() {
    size_t n = 0;
    while (n < s_.size() && s_[n] == ' ') ++n;
    s_.remove_prefix(n);
    return n;
  }
  bool Peek(char c) const { return !s_.empty() && s_[0] == c; }

  bool Double(double& out) {
    // from_chars would also accept "inf"/"nan"; logs only hold decimals.
    if (s_.empty() || !(std::isdigit(static_cast<unsigned char>(s_[0])))) {
      return false;
    }
    auto [ptr, ec] = std::from_chars(s_.data(), s_.data() + s_.size(), out,
                                     std::chars_format::fixed);
    if (ec != std::errc()) return false;
    s_.remove_prefix(ptr - s_.data());
    return true;
  }
  bool Int(int64_t& out) {
    auto [ptr, ec] = std::from_chars(s_.data(), s_.data() + s_.size(), out);
    if (ec != std::errc() || ptr == s_.data()) return false;
    s_.remove_prefix(ptr - s_.data());
    return true;
  }
  bool Until(char stop, std::string_view& out) {
    const size_t pos = s_.find(stop);
    if (pos == std::string_view::npos) return false;
    out = s_.substr(0, pos);
    s_.remove_prefix(pos);
    return true;
  }
  // Reads "(...)" with balanced nesting; `out` excludes the outer parens.
  bool Parenthesized(std::string_view& out) {
    if (!Peek('(')) return false;
    int depth = 0;
    for (size_t i = 0; i < s_.size(); ++i) {
      if (s_[i] == '(') ++depth;
      if (s_[i] == ')' && --depth == 0) {
        out = s_.substr(1, i - 1);
        s_.remove_prefix(i + 1);
        return true;
      }
    }
    return false;
  }

 private:
  std::string_view s_;
};

bool ParseSize(Cursor& c, uint64_t& bytes) {
  double v;
  if (!c.Double(v)) return false;
  uint64_t scale;
  if (c.Eat("G")) scale = 1ull << 30;
  else if (c.Eat("M")) scale = 1ull << 20;
  else if (c.Eat("K")) scale = 1ull << 10;
  else if (c.Eat("B")) scale = 1;
  else return false;
  bytes = static_cast<uint64_t>(v * static_cast<double>(scale) + 0.5);
  return true;
}

// "<b>-><a>(<c>)"
bool ParseHeap(Cursor& c, GcEvent& e) {
  uint64_t before, after, capacity;
  if (!ParseSize(c, before) || !c.Eat("->") || !ParseSize(c, after) ||
      !c.Eat("(") || !ParseSize(c, capacity) || !c.Eat(")")) {
    return false;
  }
  e.heap_before = before;
  e.heap_after = after;
  e.heap_capacity = capacity;
  return true;
}

bool ParseDurationToEnd(Cursor& c, double& ms) {
  if (!c.Double(ms) || !c.Eat("ms")) return false;
  c.SkipSpaces();
  return c.AtEnd();
}

// A lone group after "Young" is a subkind only if it is one the JVM prints.
bool IsYoungSubkind(std::string_view g) {
  return g == "Normal" || g == "Mixed" || g == "Concurrent Start" ||
         g == "Prepare Mixed" || g == "Concurrent End";
}

bool ParsePause(Cursor c, GcEvent& e) {
  // Kind word and the parenthesized groups that follow it.
  std::string_view word;
  if (!c.Until(' ', word)) return false;
  c.Eat(word);
  std::vector<std::string_view> groups;
  for (;;) {
    c.SkipSpaces();
    std::string_view g;
    if (!c.Parenthesized(g)) break;
    groups.push_back(g);
  }
  Cursor sizes = c;
  if (ParseHeap(sizes, e)) {
    c = sizes;
    c.SkipSpaces();
  }
  if (!ParseDurationToEnd(c, e.duration_ms)) return false;

  std::string_view subkind;
  std::string_view cause;
  if (word == "Young") {
    if (groups.size() >= 2) {
      subkind = groups[0];
      cause = groups[1];
    } else if (groups.size() == 1) {
      (IsYoungSubkind(groups[0]) ? subkind : cause) = groups[0];
    }
    if (groups.size() > 2) return false;
    e.kind = subkind == "Mixed" ? GcEventKind::kMixedPause
                                : GcEventKind::kYoungPause;
  } else if (word == "Mixed" || word == "Remark" || word == "Cleanup" ||
             word == "Full") {
    if (groups.size() > 1) return false;
    if (groups.size() == 1) cause = groups[0];
    e.kind = word == "Mixed"    ? GcEventKind::kMixedPause
             : word == "Remark" ? GcEventKind::kRemarkPause
             : word == "Cleanup" ? GcEventKind::kCleanupPause
                                 : GcEventKind::kFullPause;
  } else {
    return false;
  }
  e.label = std::string(word);
  if (!subkind.empty()) e.label += " (" + std::string(subkind) + ")";
  e.cause = std::string(cause);
  return true;
}

enum class LineResult { kSkipped, kParsed };

LineResult ParseLine(std::string_view line, ParsedLog& out) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
    line.remove_suffix(1);
  }
  Cursor c(line);
  double ts;
  if (!c.Eat("[") || !c.Double(ts) || !c.Eat("s]")) return LineResult::kSkipped;
  bool info = c.Eat("[info]");
  bool debug = !info && c.Eat("[debug]");
  if (!info && !debug) return LineResult::kSkipped;
  bool phases = c.Eat("[gc,phases]");
  if (!phases && !c.Eat("[gc]")) return LineResult::kSkipped;
  int64_t id;
  if (!c.Eat(" GC(") || !c.Int(id) || !c.Eat(") ")) return LineResult::kSkipped;

  if (phases) {
    c.SkipSpaces();
    std::string_view name;
    if (!c.Until(':', name) || !c.Eat(": ")) return LineResult::kSkipped;
    auto phase = NormalizePhaseName(name);
    double ms;
    if (!phase || !ParseDurationToEnd(c, ms)) return LineResult::kSkipped;
    out.phases.push_back({id, *phase, ms});
    return LineResult::kParsed;
  }
  if (!info) return LineResult::kSkipped;

  GcEvent e;
  e.gc_id = id;
  e.timestamp = ts;
  if (c.Eat("Concurrent Mark Cycle")) {
    if (c.AtEnd()) return LineResult::kParsed;  // cycle start
    if (!c.Eat(" ") || !ParseDurationToEnd(c, e.duration_ms)) {
      return LineResult::kSkipped;
    }
    e.kind = GcEventKind::kConcurrentMarkCycle;
    e.label = "Concurrent Mark Cycle";
    out.events.push_back(std::move(e));
    return LineResult::kParsed;
  }
  if (!c.Eat("Pause ")) return LineResult::kSkipped;
  if (!ParsePause(c, e)) return LineResult::kSkipped;
  out.events.push_back(std::move(e));
  return LineResult::kParsed;
}

void Account(ParsedLog& log, std::string_view line) {
  if (ParseLine(line, log) == LineResult::kParsed) {
    ++log.parsed_lines;
  } else {
    ++log.skipped_lines;
  }
}

void SortEvents(ParsedLog& log) {
  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const GcEvent& a, const GcEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
}

std::string Shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::fixed);
  return std::string(buf, ptr);
}

std::string FormatSize(uint64_t bytes) {
  static constexpr struct {
    uint64_t scale;
    char suffix;
  } kUnits[] = {{1ull << 30, 'G'}, {1ull << 20, 'M'}, {1ull << 10, 'K'}};
  for (const auto& u : kUnits) {
    if (bytes != 0 && bytes % u.scale == 0) {
      return std::to_string(bytes / u.scale) + u.suffix;
    }
  }
  return std::to_string(bytes) + "B";
}

}  // namespace

ParsedLog ParseLogText(std::string_view text) {
  ParsedLog log;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    Account(log, text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  SortEvents(log);
  return log;
}

ParsedLog ParseLog(std::istream& in) {
  ParsedLog log;
  std::string line;
  while (std::getline(in, line)) Account(log, line);
  SortEvents(log);
  return log;
}

std::string FormatEventLine(const GcEvent& e) {
  std::string line = "[" + Shortest(e.timestamp) + "s][info][gc] GC(" +
                     std::to_string(e.gc_id) + ") ";
  if (e.kind == GcEventKind::kConcurrentMarkCycle) {
    return line + "Concurrent Mark Cycle " + Shortest(e.duration_ms) + "ms";
  }
  line += "Pause " + e.label;
  if (!e.cause.empty()) line += " (" + e.cause + ")";
  if (e.heap_before && e.heap_after && e.heap_capacity) {
    line += " " + FormatSize(*e.heap_before) + "->" + FormatSize(*e.heap_after) +
            "(" + FormatSize(*e.heap_capacity) + ")";
  }
  return line + " " + Shortest(e.duration_ms) + "ms";
}

std::string FormatPhaseLine(const PhaseSample& s, double timestamp) {
  return "[" + Shortest(timestamp) + "s][info][gc,phases] GC(" +
         std::to_string(s.gc_id) + ")   " + GcPhaseName(s.phase) + ": " +
         Shortest(s.duration_ms) + "ms";
}

GcSummary Summarize(const ParsedLog& log, std::optional<double> total_runtime_s) {
  GcSummary s;
  s.skipped_lines = log.skipped_lines;
  double last_ts = 0;
  double gc_ms = 0;
  double concurrent_ms = 0;
  std::unordered_set<int64_t> pause_ids;
  for (const GcEvent& e : log.events) {
    last_ts = std::max(last_ts, e.timestamp);
    if (!e.is_pause()) {
      concurrent_ms += e.duration_ms;
      continue;
    }
    pause_ids.insert(e.gc_id);
    ++s.pause_count;
    gc_ms += e.duration_ms;
    s.max_pause_ms = std::max(s.max_pause_ms.value_or(0), e.duration_ms);
  }
  if (s.pause_count > 0) s.avg_pause_ms = gc_ms / s.pause_count;
  s.total_runtime_s = total_runtime_s && *total_runtime_s >= last_ts
                          ? *total_runtime_s
                          : last_ts;
  s.gc_time_s = gc_ms / 1000.0;
  s.concurrent_time_s = concurrent_ms / 1000.0;
  s.gc_fraction_pct =
      s.total_runtime_s > 0 ? 100.0 * s.gc_time_s / s.total_runtime_s : 0.0;

  for (const PhaseSample& p : log.phases) {
    if (pause_ids.count(p.gc_id) == 0 && p.phase != GcPhase::kConcurrentMark) {
      continue;
    }
    s.phase_time_ms[p.phase] += p.duration_ms;
  }
  if (gc_ms > 0) {
    double named_pct = 0;
    for (const auto& [phase, ms] : s.phase_time_ms) {
      if (phase == GcPhase::kOther || phase == GcPhase::kConcurrentMark) {
        continue;
      }
      const double pct = 100.0 * ms / gc_ms;
      s.phase_breakdown_pct[phase] = pct;
      named_pct += pct;
    }
    s.phase_breakdown_pct[GcPhase::kOther] = 100.0 - named_pct;
  }
  return s;
}

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string OptionalMs(const std::optional<double>& v) {
  return v ? Fixed(*v, 3) : std::string("n/a");
}

}  // namespace

void WriteSummaryTable(std::ostream& out, const GcSummary& s) {
  out << "total runtime      " << Fixed(s.total_runtime_s, 3) << " s\n"
      << "GC time            " << Fixed(s.gc_time_s, 6) << " s\n"
      << "GC fraction        " << Fixed(s.gc_fraction_pct, 3) << " %\n"
      << "pauses             " << s.pause_count << "\n"
      << "max pause          " << OptionalMs(s.max_pause_ms) << " ms\n"
      << "avg pause          " << OptionalMs(s.avg_pause_ms) << " ms\n"
      << "concurrent time    " << Fixed(s.concurrent_time_s, 6) << " s\n"
      << "skipped lines      " << s.skipped_lines << "\n";
  if (!s.phase_breakdown_pct.empty()) {
    out << "\nphase breakdown (% of pause time)\n";
    for (const auto& [phase, pct] : s.phase_breakdown_pct) {
      char row[96];
      std::snprintf(row, sizeof(row), "  %-20s %8.3f %%\n", GcPhaseName(phase),
                    pct);
      out << row;
    }
  }
}

void WriteSummaryCsv(std::ostream& out, const GcSummary& s) {
  out << "metric,value\n"
      << "total_runtime_s," << Fixed(s.total_runtime_s, 6) << "\n"
      << "gc_time_s," << Fixed(s.gc_time_s, 6) << "\n"
      << "gc_fraction_pct," << Fixed(s.gc_fraction_pct, 6) << "\n"
      << "pause_count," << s.pause_count << "\n"
      << "max_pause_ms," << (s.max_pause_ms ? Fixed(*s.max_pause_ms, 6) : "")
      << "\n"
      << "avg_pause_ms," << (s.avg_pause_ms ? Fixed(*s.avg_pause_ms, 6) : "")
      << "\n"
      << "concurrent_time_s," << Fixed(s.concurrent_time_s, 6) << "\n"
      << "skipped_lines," << s.skipped_lines << "\n"
      << "\nphase,percent\n";
  for (const auto& [phase, pct] : s.phase_breakdown_pct) {
    out << GcPhaseName(phase) << "," << Fixed(pct, 6) << "\n";
  }
}

}  // namespace gclab
