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


#include "commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "flags.h"
#include "gclab/copying.h"
#include "gclab/gclog.h"
#include "gclab/heap.h"
#include "gclab/heap_oracles.h"
#include "gclab/marking.h"
#include "gclab/promotion.h"
#include "gclab/workload.h"

namespace gclab::cli {
namespace {

using std::chrono::nanoseconds;

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string FormatDouble(double v, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Shortest text that reads back as `v` (degree values such as 8 or 0.5).
std::string FormatDegree(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string JoinNs(const std::vector<nanoseconds>& ds) {
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(ds[i].count());
  }
  return out;
}

nanoseconds Median(std::vector<nanoseconds> ds) {
  if (ds.empty()) return nanoseconds(0);
  std::sort(ds.begin(), ds.end());
  const size_t mid = ds.size() / 2;
  if (ds.size() % 2 == 1) return ds[mid];
  return (ds[mid - 1] + ds[mid]) / 2;
}

class Row {
 public:
  template <typename T>
  Row& operator<<(const T& v) {
    if (!first_) line_ += ',';
    first_ = false;
    if constexpr (std::is_convertible_v<T, std::string>) {
      line_ += Quote(std::string(v));
    } else {
      line_ += std::to_string(v);
    }
    return *this;
  }
  void WriteTo(std::ostream& out) const { out << line_ << '\n' << std::flush; }

 private:
  std::string line_;
  bool first_ = true;
};

void RequirePositive(const std::vector<uint64_t>& values, const char* flag) {
  if (values.empty()) throw FlagError(std::string(flag) + " needs at least one value");
  for (uint64_t v : values) {
    if (v == 0) throw FlagError(std::string(flag) + " values must be >= 1");
  }
}

void RequireReps(uint32_t reps) {
  if (reps == 0) throw FlagError("--reps must be >= 1");
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += "\"\"";
        ++i;
      } else {
        if (c == '"') quoted = false;
        fields.back() += c;
      }
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      if (c == '"') quoted = true;
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

std::string MarkEngineName(const EngineConfig& cfg) {
  switch (cfg.kind) {
    case EngineKind::kSerial:
      return "serial";
    case EngineKind::kWorkerPool:
      return "worker_pool(" + std::to_string(cfg.workers) + ")";
    case EngineKind::kFrontier:
      return "frontier(" + std::to_string(cfg.lanes) + "," +
             FormatDurationNs(cfg.launch_latency) + ")";
  }
  return "?";
}

bool IsVolatileColumn(std::string_view name) {
  static const std::set<std::string_view> kVolatile = {
      // timing
      "median_ns", "bandwidth_GBps", "rep_ns", "cas_plain_ratio", "mark_ns",
      "copy_ns", "fixup_ns", "total_ns", "rep_total_ns", "speedup_vs_cpu1",
      "duration_ns", "stw_cas_ns",
      // thread scheduling
      "visited_count", "cas_failures", "satb_logged", "remark_marked",
      "final_marked", "mutations_applied", "mutations_skipped",
      "objects_allocated"};
  return kVolatile.count(name) > 0;
}

std::string StripVolatileColumns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<bool> keep;
  std::string out;
  while (std::getline(in, line)) {
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (keep.empty()) {
      for (const std::string& f : fields) keep.push_back(!IsVolatileColumn(f));
    }
    bool first = true;
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i < keep.size() && !keep[i]) continue;
      if (!first) out += ',';
      first = false;
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

int RunCopyBandwidth(const CopyBandwidthOptions& opts, std::ostream& csv,
                     std::ostream& log) {
  RequirePositive(opts.n_objects, "--n");
  RequireReps(opts.reps);
  if (opts.object_size == 0) throw FlagError("--size must be >= 1");
  const std::vector<EngineConfig> engines =
      opts.engines.empty() ? DefaultCopyEngines() : opts.engines;
  for (const EngineConfig& e : engines) e.Validate();

  csv << BandwidthCsvHeader() << '\n';
  for (uint64_t n : opts.n_objects) {
    for (const EngineConfig& engine : engines) {
      CopyBenchConfig cfg;
      cfg.n_objects = n;
      cfg.object_size = opts.object_size;
      cfg.engine = engine;
      cfg.repetitions = opts.reps;
      cfg.seed = opts.seed;
      try {
        const BandwidthReport report = CopyBench(cfg);
        csv << BandwidthCsvRow(cfg, report) << '\n' << std::flush;
      } catch (const HeapCorruption& e) {
        log << "copy-bandwidth: verification failed for " << CopyEngineName(engine)
            << " n=" << n << ": " << e.what() << '\n';
        return kExitInvariant;
      }
    }
  }
  return kExitOk;
}

int RunMark(const MarkOptions& opts, std::ostream& csv, std::ostream& log) {
  RequirePositive(opts.n_objects, "--n");
  RequireReps(opts.reps);
  if (opts.degrees.empty()) throw FlagError("--x needs at least one value");
  if (opts.engines.empty()) throw FlagError("--engines needs at least one value");
  if (opts.modes.empty()) throw FlagError("--mode needs at least one value");
  for (const EngineConfig& e : opts.engines) e.Validate();

  csv << "n_objects,x,seed,roots,payload_size,edges,engine,kind,workers,lanes,"
         "launch_latency_ns,mode,reps,marked_count,dispatch_count,verified,"
         "median_ns,cas_plain_ratio,visited_count,cas_failures,rep_ns\n";
  int status = kExitOk;
  for (uint64_t n : opts.n_objects) {
    for (double x : opts.degrees) {
      GraphGenConfig gcfg;
      gcfg.n_objects = n;
      gcfg.avg_out_degree = x;
      gcfg.root_count = opts.root_count ? opts.root_count
                                        : GraphGenConfig::DefaultRootCount(n);
      gcfg.payload_size = opts.payload_size;
      gcfg.seed = opts.seed;
      HeapConfig hcfg;
      hcfg.young_capacity = std::max<uint64_t>(1, n * opts.payload_size);
      hcfg.old_capacity = 1;
      auto heap = std::make_unique<Heap>(hcfg);
      const std::vector<ObjectRef> roots = GenRandomGraph(*heap, gcfg);
      uint64_t edges = 0;
      for (uint32_t i = 0; i < heap->table_size(); ++i) {
        edges += heap->RecordAt(i).slot_count;
      }
      std::vector<uint8_t> oracle;
      if (opts.verify) oracle = ReachableBitmap(*heap, roots);

      for (const EngineConfig& base : opts.engines) {
        struct Cell {
          std::vector<nanoseconds> reps;
          MarkResult last;
          bool verified = true;
        };
        auto run = [&](MarkMode mode) {
          EngineConfig cfg = base;
          cfg.mark_mode = mode;
          Cell cell;
          for (uint32_t r = 0; r < opts.reps; ++r) {
            MarkResult result = Mark(*heap, roots, cfg);
            cell.reps.push_back(result.duration);
            if (opts.verify) {
              std::vector<uint8_t> got = result.marked;
              got.resize(oracle.size());
              cell.verified = cell.verified && got == oracle;
            }
            cell.last = std::move(result);
          }
          return cell;
        };
        const bool want_plain =
            std::find(opts.modes.begin(), opts.modes.end(), MarkMode::kPlain) !=
            opts.modes.end();
        const bool want_cas =
            std::find(opts.modes.begin(), opts.modes.end(), MarkMode::kCas) !=
            opts.modes.end();
        // The cas ratio needs a plain baseline even when plain rows are off.
        std::optional<Cell> plain;
        if (want_plain || want_cas) plain = run(MarkMode::kPlain);
        for (MarkMode mode : opts.modes) {
          Cell cell = mode == MarkMode::kPlain ? *plain : run(mode);
          const nanoseconds median = Median(cell.reps);
          std::string ratio;
          if (mode == MarkMode::kCas && Median(plain->reps).count() > 0) {
            ratio = FormatDouble(static_cast<double>(median.count()) /
                                     Median(plain->reps).count(),
                                 "%.4f");
          }
          if (!cell.verified) {
            status = kExitInvariant;
            log << "mark: marked set differs from reachability oracle for "
                << MarkEngineName(base) << " " << MarkModeName(mode) << " n=" << n
                << " x=" << x << '\n';
          }
          Row row;
          row << n << FormatDegree(x) << opts.seed << roots.size()
              << opts.payload_size << edges << MarkEngineName(base)
              << EngineKindName(base.kind) << base.workers << base.lanes
              << base.launch_latency.count() << MarkModeName(mode) << opts.reps
              << cell.last.marked_count << cell.last.dispatch_count
              << (opts.verify ? (cell.verified ? "true" : "false") : "skipped")
              << median.count() << ratio << cell.last.visited_count
              << cell.last.cas_failures << JoinNs(cell.reps);
          row.WriteTo(csv);
        }
      }
    }
  }
  return status;
}

int RunPromote(const PromoteOptions& opts, std::ostream& csv, std::ostream& log) {
  RequirePositive(opts.total_bytes, "--total");
  RequirePositive(opts.object_sizes, "--size");
  RequireReps(opts.reps);
  if (opts.collectors.empty()) throw FlagError("--engines needs at least one value");
  if (opts.young_capacity == 0) throw FlagError("--young must be >= 1");
  std::vector<Collector> collectors;
  for (const std::string& name : opts.collectors) {
    collectors.push_back(ParseCollector(name, opts.bulk_latency));
  }
  const Collector baseline = ParseCollector("cpu1", opts.bulk_latency);

  csv << "total_bytes,object_size,engine,threshold,young_capacity,old_capacity,"
         "launch_latency_ns,reps,objects,collections,objects_promoted,"
         "bytes_promoted,objects_reclaimed,objects_small_engine,"
         "objects_large_engine,objects_cpu,objects_device,status,mark_ns,"
         "copy_ns,fixup_ns,total_ns,speedup_vs_cpu1,rep_total_ns\n";

  struct Outcome {
    std::string status = "ok";
    uint64_t collections = 0;
    PromotionReport sum;
    std::vector<nanoseconds> rep_total;
    std::vector<nanoseconds> rep_mark, rep_copy, rep_fixup;
  };
  int exit_code = kExitOk;

  for (uint64_t total : opts.total_bytes) {
    for (uint64_t size : opts.object_sizes) {
      const ListGenConfig lcfg{total, size};
      const uint64_t objects = ListObjectCount(lcfg);
      if (objects == 0) {
        throw FlagError("--size " + std::to_string(size) + " exceeds --total " +
                        std::to_string(total));
      }
      HeapConfig hcfg;
      hcfg.young_capacity = opts.young_capacity;
      hcfg.old_capacity = opts.old_capacity ? opts.old_capacity : total;
      PromotionPolicy policy;
      policy.device_threshold = opts.threshold;

      auto run = [&](const Collector& c) {
        Outcome out;
        for (uint32_t r = 0; r < opts.reps; ++r) {
          Heap heap(hcfg);
          PromotionReport sum;
          uint64_t collections = 0;
          try {
            GenLinkedList(heap, lcfg, [&](Heap& h) {
              const PromotionReport rep =
                  Promote(h, policy, c.small_engine, c.large_engine, c.mark_engine);
              ++collections;
              sum.objects_promoted += rep.objects_promoted;
              sum.bytes_promoted += rep.bytes_promoted;
              sum.objects_reclaimed += rep.objects_reclaimed;
              sum.mark_duration += rep.mark_duration;
              sum.copy_duration += rep.copy_duration;
              sum.fixup_duration += rep.fixup_duration;
              sum.objects_small_engine += rep.objects_small_engine;
              sum.objects_large_engine += rep.objects_large_engine;
              sum.objects_cpu += rep.objects_cpu;
              sum.objects_device += rep.objects_device;
            });
          } catch (const OldGenerationOverflow&) {
            out.status = "old_overflow";
          } catch (const AllocationFailure&) {
            out.status = "allocation_failure";
          }
          if (out.status == "ok" &&
              (CountDanglingReferences(heap) != 0 || heap.live_count() != objects ||
               !heap.VerifyRememberedSet())) {
            out.status = "invariant_violation";
          }
          out.collections = collections;
          out.sum = sum;
          out.rep_total.push_back(sum.total_duration());
          out.rep_mark.push_back(sum.mark_duration);
          out.rep_copy.push_back(sum.copy_duration);
          out.rep_fixup.push_back(sum.fixup_duration);
          if (out.status != "ok") break;
        }
        return out;
      };

      std::optional<Outcome> base;
      std::vector<std::pair<const Collector*, Outcome>> results;
      for (const Collector& c : collectors) results.emplace_back(&c, run(c));
      for (const auto& [c, o] : results) {
        if (c->name == "cpu1") base = o;
      }
      if (!base) base = run(baseline);

      for (const auto& [c, o] : results) {
        const nanoseconds median = Median(o.rep_total);
        const nanoseconds base_median = Median(base->rep_total);
        std::string speedup;
        if (o.status == "ok" && base->status == "ok" && median.count() > 0) {
          speedup = FormatDouble(
              static_cast<double>(base_median.count()) / median.count(), "%.4f");
        }
        if (o.status == "invariant_violation") exit_code = kExitInvariant;
        if (o.status != "ok") {
          log << "promote: " << c->name << " total=" << total << " size=" << size
              << ": " << o.status << '\n';
        }
        Row row;
        row << total << size << c->name << opts.threshold << hcfg.young_capacity
            << hcfg.old_capacity << opts.bulk_latency.count() << opts.reps
            << objects << o.collections << o.sum.objects_promoted
            << o.sum.bytes_promoted << o.sum.objects_reclaimed
            << o.sum.objects_small_engine << o.sum.objects_large_engine
            << o.sum.objects_cpu << o.sum.objects_device << o.status
            << Median(o.rep_mark).count() << Median(o.rep_copy).count()
            << Median(o.rep_fixup).count() << median.count() << speedup
            << JoinNs(o.rep_total);
        row.WriteTo(csv);
      }
    }
  }
  return exit_code;
}

int RunConcurrentMark(const ConcurrentMarkOptions& opts, std::ostream& csv,
                      std::ostream& log) {
  RequirePositive(opts.n_objects, "--n");
  if (opts.degrees.empty()) throw FlagError("--x needs at least one value");
  if (opts.mutators.empty()) throw FlagError("--mutators needs at least one value");
  if (opts.mutations.empty()) throw FlagError("--mutations needs at least one value");
  if (opts.seeds == 0) throw FlagError("--seeds must be >= 1");
  EngineConfig engine = opts.engine;
  engine.mark_mode = MarkMode::kCas;
  engine.Validate();

  csv << "n_objects,x,seed,engine,markers,mutators,mutations,roots,"
         "snapshot_live,violations,final_marked,satb_logged,remark_marked,"
         "mutations_applied,mutations_skipped,objects_allocated,duration_ns,"
         "stw_cas_ns\n";
  uint64_t total_violations = 0;
  for (uint64_t s = opts.seed; s < opts.seed + opts.seeds; ++s) {
    for (uint64_t n : opts.n_objects) {
      for (double x : opts.degrees) {
        for (uint64_t mutators : opts.mutators) {
          for (uint64_t mutations : opts.mutations) {
            GraphGenConfig gcfg;
            gcfg.n_objects = n;
            gcfg.avg_out_degree = x;
            gcfg.root_count = GraphGenConfig::DefaultRootCount(n);
            gcfg.seed = s;
            MutationStreamConfig mcfg;
            mcfg.seed = s * 0x9E3779B97F4A7C15ull + 1;
            mcfg.mutation_count = mutations;
            HeapConfig hcfg;
            hcfg.young_capacity =
                n * gcfg.payload_size + mutations * mcfg.allocation_payload + 1;
            hcfg.old_capacity = 1;
            Heap heap(hcfg);
            const std::vector<ObjectRef> roots = GenRandomGraph(heap, gcfg);
            const std::vector<uint8_t> snapshot = ReachableBitmap(heap, roots);
            const uint64_t snapshot_live =
                std::count(snapshot.begin(), snapshot.end(), uint8_t{1});
            const MarkResult stw = Mark(heap, roots, engine);
            const MutationStream stream = GenMutationStream(mcfg);
            const ConcurrentMarkResult result = ConcurrentMark(
                heap, roots, engine, static_cast<uint32_t>(mutators), stream);
            const uint64_t violations =
                CountSnapshotViolations(snapshot, result.mark.marked);
            total_violations += violations;
            if (violations > 0) {
              log << "concurrent-mark: " << violations
                  << " snapshot-live objects left unmarked (seed " << s << ")\n";
            }
            Row row;
            row << n << FormatDegree(x) << s << MarkEngineName(engine)
                << (engine.kind == EngineKind::kWorkerPool ? engine.workers : 1u)
                << mutators << mutations << roots.size() << snapshot_live
                << violations << result.mark.marked_count << result.satb_logged
                << result.remark_marked << result.replay.applied
                << result.replay.skipped << result.replay.allocated
                << result.mark.duration.count() << stw.duration.count();
            row.WriteTo(csv);
          }
        }
      }
    }
  }
  return total_violations == 0 ? kExitOk : kExitInvariant;
}

int RunAnalyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& csv,
               std::ostream& log) {
  ParsedLog parsed;
  if (opts.path == "-") {
    parsed = ParseLog(std::cin);
  } else {
    std::ifstream in(opts.path, std::ios::binary);
    if (!in) {
      log << "analyze: cannot read '" << opts.path << "'\n";
      return kExitUsage;
    }
    parsed = ParseLog(in);
  }
  if (parsed.parsed_lines == 0 && parsed.skipped_lines > 0) {
    log << "warning: no GC log lines recognized (" << parsed.skipped_lines
        << " skipped)\n";
  }
  const GcSummary summary = Summarize(parsed, opts.total_runtime_s);
  WriteSummaryTable(out, summary);
  if (&csv == &out) out << '\n';
  WriteSummaryCsv(csv, summary);
  return kExitOk;
}

}  // namespace gclab::cli
