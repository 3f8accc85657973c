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


#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "commands.h"
#include "flags.h"
#include "gclab/object_ref.h"

namespace {

using namespace gclab;
using namespace gclab::cli;

// Standard output unless a path was given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw FlagError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool ok() { return stream().good(); }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::string csv;
  uint64_t seed = 1;
  uint32_t reps = 5;
};

void AddCommon(CLI::App* cmd, Common& c, uint32_t default_reps) {
  c.reps = default_reps;
  cmd->add_option("--csv", c.csv, "CSV output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "Base RNG seed")->capture_default_str();
  cmd->add_option("--reps", c.reps, "Timed repetitions per cell")
      ->capture_default_str();
}

int Finish(int code, Output& out) {
  if (!out.ok()) {
    std::cerr << "error: failed writing CSV output\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gclab: generational GC engine benchmarks and G1 log analysis"};
  app.require_subcommand(1);

  // copy-bandwidth
  Common copy_common;
  std::string copy_n = "1K:16M:x2";
  std::string copy_engines = "all";
  uint64_t copy_size = 8;
  auto* copy = app.add_subcommand("copy-bandwidth", "Object copy bandwidth per engine");
  AddCommon(copy, copy_common, 5);
  copy->add_option("--n", copy_n, "Object counts (list or A:B:xK range)")->capture_default_str();
  copy->add_option("--size", copy_size, "Object size in bytes")->capture_default_str();
  copy->add_option("--engines", copy_engines,
                   "all, or a list of single | workers:T | workers_blocked:T[:B] | "
                   "bulk[:lanes[:latency[:xK]]]")
      ->capture_default_str();

  // mark
  Common mark_common;
  std::string mark_n = "2e5";
  std::string mark_x = "8,40,200,1000";
  std::string mark_engines = "serial,worker_pool,frontier";
  std::string mark_modes = "plain,cas";
  uint32_t mark_workers = 4;
  uint64_t mark_roots = 0;
  uint64_t mark_payload = 16;
  bool mark_verify = false;
  auto* mark = app.add_subcommand("mark", "Stop-the-world marking over random graphs");
  AddCommon(mark, mark_common, 5);
  mark->add_option("--n", mark_n, "Object counts")->capture_default_str();
  mark->add_option("--x", mark_x, "Average out-degrees")->capture_default_str();
  mark->add_option("--engines", mark_engines,
                   "serial | worker_pool[:T] | frontier[:lanes[:latency]]")
      ->capture_default_str();
  mark->add_option("--mode", mark_modes, "plain, cas or both")->capture_default_str();
  mark->add_option("--workers", mark_workers, "Threads for a bare worker_pool")
      ->capture_default_str();
  mark->add_option("--roots", mark_roots, "Root count (0: max(1, n/1000))")
      ->capture_default_str();
  mark->add_option("--payload", mark_payload, "Payload bytes per object")
      ->capture_default_str();
  mark->add_flag("--verify", mark_verify, "Check every cell against the reachability oracle");

  // promote
  Common promote_common;
  std::string promote_total = "256M";
  std::string promote_sizes = "8K,64K,1M,8M";
  std::string promote_engines = "cpu1,cpu4,bulk1,bulk4";
  std::string promote_young = "32M";
  std::string promote_old = "0";
  std::string promote_threshold = "0";
  std::string promote_latency = "50us";
  auto* promote = app.add_subcommand("promote", "Linked-list promotion benchmark");
  AddCommon(promote, promote_common, 3);
  promote->add_option("--total", promote_total, "Total list bytes")->capture_default_str();
  promote->add_option("--size", promote_sizes, "Object sizes")->capture_default_str();
  promote->add_option("--engines", promote_engines, "Collectors: cpuK, bulkK")
      ->capture_default_str();
  promote->add_option("--young", promote_young, "Young capacity")->capture_default_str();
  promote->add_option("--old", promote_old, "Old capacity (0: --total)")
      ->capture_default_str();
  promote->add_option("--threshold", promote_threshold,
                      "Objects >= this size use the large-object engine")
      ->capture_default_str();
  promote->add_option("--latency", promote_latency, "Bulk launch latency")
      ->capture_default_str();

  // concurrent-mark
  Common cm_common;
  std::string cm_n = "1e5";
  std::string cm_x = "8";
  std::string cm_engine = "worker_pool";
  uint32_t cm_markers = 4;
  std::string cm_mutators = "4";
  std::string cm_mutations = "1e4";
  uint64_t cm_seeds = 1;
  auto* cm = app.add_subcommand("concurrent-mark", "SATB marking with mutator threads");
  AddCommon(cm, cm_common, 1);
  cm->add_option("--n", cm_n, "Object counts")->capture_default_str();
  cm->add_option("--x", cm_x, "Average out-degrees")->capture_default_str();
  cm->add_option("--engine", cm_engine, "Marker engine (mode is always cas)")
      ->capture_default_str();
  cm->add_option("--markers", cm_markers, "Marker threads for worker_pool")
      ->capture_default_str();
  cm->add_option("--mutators", cm_mutators, "Mutator thread counts")->capture_default_str();
  cm->add_option("--mutations", cm_mutations, "Mutation stream lengths")
      ->capture_default_str();
  cm->add_option("--seeds", cm_seeds, "Consecutive seeds to sweep from --seed")
      ->capture_default_str();

  // analyze
  AnalyzeOptions analyze_opts;
  std::string analyze_csv;
  double analyze_runtime = -1;
  auto* analyze = app.add_subcommand("analyze", "Summarize a G1 unified GC log");
  analyze->add_option("log", analyze_opts.path, "Log file, or - for stdin")->required();
  analyze->add_option("--csv", analyze_csv, "CSV output path (default: after the table)");
  analyze->add_option("--runtime", analyze_runtime,
                      "Total runtime in seconds (default: last event timestamp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*copy) {
      CopyBandwidthOptions o;
      o.n_objects = ParseCountGrid(copy_n);
      o.object_size = copy_size;
      o.reps = copy_common.reps;
      o.seed = copy_common.seed;
      if (copy_engines != "all") {
        for (const std::string& e : SplitList(copy_engines)) {
          o.engines.push_back(ParseCopyEngine(e));
        }
      }
      Output out(copy_common.csv);
      return Finish(RunCopyBandwidth(o, out.stream(), std::cerr), out);
    }
    if (*mark) {
      MarkOptions o;
      o.n_objects = ParseCountGrid(mark_n);
      o.degrees = ParseDoubleList(mark_x);
      for (const std::string& e : SplitList(mark_engines)) {
        o.engines.push_back(ParseMarkEngine(e, mark_workers));
      }
      for (const std::string& m : SplitList(mark_modes)) {
        o.modes.push_back(ParseMarkMode(m));
      }
      o.reps = mark_common.reps;
      o.seed = mark_common.seed;
      o.root_count = mark_roots;
      o.payload_size = mark_payload;
      o.verify = mark_verify;
      Output out(mark_common.csv);
      return Finish(RunMark(o, out.stream(), std::cerr), out);
    }
    if (*promote) {
      PromoteOptions o;
      o.total_bytes = ParseCountGrid(promote_total);
      o.object_sizes = ParseCountGrid(promote_sizes);
      o.collectors = SplitList(promote_engines);
      o.young_capacity = ParseCount(promote_young);
      o.old_capacity = ParseCount(promote_old);
      o.threshold = ParseCount(promote_threshold);
      o.bulk_latency = ParseDuration(promote_latency);
      o.reps = promote_common.reps;
      Output out(promote_common.csv);
      return Finish(RunPromote(o, out.stream(), std::cerr), out);
    }
    if (*cm) {
      ConcurrentMarkOptions o;
      o.n_objects = ParseCountGrid(cm_n);
      o.degrees = ParseDoubleList(cm_x);
      o.engine = ParseMarkEngine(cm_engine, cm_markers);
      o.mutators = ParseCountGrid(cm_mutators);
      o.mutations = ParseCountGrid(cm_mutations);
      o.seed = cm_common.seed;
      o.seeds = cm_seeds;
      Output out(cm_common.csv);
      return Finish(RunConcurrentMark(o, out.stream(), std::cerr), out);
    }
    if (*analyze) {
      if (analyze_runtime >= 0) analyze_opts.total_runtime_s = analyze_runtime;
      Output out(analyze_csv);
      std::ostream& csv = analyze_csv.empty() ? std::cout : out.stream();
      return Finish(RunAnalyze(analyze_opts, std::cout, csv, std::cerr), out);
    }
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const HeapCorruption& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
