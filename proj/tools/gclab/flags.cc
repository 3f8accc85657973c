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


#include "flags.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "gclab/copying.h"

namespace gclab::cli {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const size_t pos = s.find(sep);
    parts.push_back(Trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

double ParseNumber(std::string_view s, std::string_view what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw FlagError("invalid " + std::string(what) + " '" + std::string(s) +
                    "'");
  }
  return v;
}

uint32_t ParseU32(std::string_view s, std::string_view what) {
  const uint64_t v = ParseCount(s);
  if (v == 0 || v > 0xFFFFFFFFull) {
    throw FlagError(std::string(what) + " must be in [1, 2^32)");
  }
  return static_cast<uint32_t>(v);
}

// "name(a,b)" -> "name:a:b"
std::string CallToColon(std::string_view s) {
  std::string out(Trim(s));
  const size_t open = out.find('(');
  if (open == std::string::npos) return out;
  if (out.back() != ')') throw FlagError("unbalanced engine spec '" + out + "'");
  out.pop_back();
  out[open] = ':';
  std::replace(out.begin(), out.end(), ',', ':');
  return out;
}

}  // namespace

uint64_t ParseCount(std::string_view text) {
  std::string_view s = Trim(text);
  if (s.empty()) throw FlagError("empty count");
  uint64_t scale = 1;
  switch (s.back()) {
    case 'K': case 'k': scale = 1ull << 10; break;
    case 'M': case 'm': scale = 1ull << 20; break;
    case 'G': case 'g': scale = 1ull << 30; break;
    default: break;
  }
  if (scale != 1) s.remove_suffix(1);
  if (s.find_first_of(".eE") == std::string_view::npos) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw FlagError("invalid count '" + std::string(text) + "'");
    }
    if (v > UINT64_MAX / scale) throw FlagError("count overflows: " + std::string(text));
    return v * scale;
  }
  const double v = ParseNumber(s, "count") * static_cast<double>(scale);
  if (v < 0 || v != std::floor(v) || v > 9.2e18) {
    throw FlagError("count must be a non-negative integer: '" +
                    std::string(text) + "'");
  }
  return static_cast<uint64_t>(v);
}

std::vector<uint64_t> ParseCountGrid(std::string_view text) {
  std::vector<uint64_t> values;
  for (std::string_view item : Split(text, ',')) {
    if (item.empty()) throw FlagError("empty item in list '" + std::string(text) + "'");
    const std::vector<std::string_view> parts = Split(item, ':');
    if (parts.size() == 1) {
      values.push_back(ParseCount(parts[0]));
      continue;
    }
    if (parts.size() != 3 || parts[2].size() < 2 ||
        (parts[2][0] != 'x' && parts[2][0] != '+')) {
      throw FlagError("range must look like A:B:xK or A:B:+K, got '" +
                      std::string(item) + "'");
    }
    const uint64_t lo = ParseCount(parts[0]);
    const uint64_t hi = ParseCount(parts[1]);
    const uint64_t step = ParseCount(parts[2].substr(1));
    const bool geometric = parts[2][0] == 'x';
    if (lo > hi) throw FlagError("range start exceeds end in '" + std::string(item) + "'");
    if (geometric && (step < 2 || lo == 0)) {
      throw FlagError("geometric range needs A >= 1 and K >= 2");
    }
    if (!geometric && step == 0) throw FlagError("arithmetic step must be >= 1");
    for (uint64_t v = lo; v <= hi;) {
      values.push_back(v);
      if (geometric ? v > hi / step : v > hi - step) break;
      v = geometric ? v * step : v + step;
    }
  }
  return values;
}

std::vector<double> ParseDoubleList(std::string_view text) {
  std::vector<double> values;
  for (std::string_view item : Split(text, ',')) {
    values.push_back(ParseNumber(item, "number"));
  }
  return values;
}

std::chrono::nanoseconds ParseDuration(std::string_view text) {
  std::string_view s = Trim(text);
  double scale = 1;
  auto strip = [&](std::string_view suffix, double factor) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      s.remove_suffix(suffix.size());
      scale = factor;
      return true;
    }
    return false;
  };
  strip("ns", 1) || strip("us", 1e3) || strip("ms", 1e6) || strip("s", 1e9);
  const double v = ParseNumber(s, "duration") * scale;
  if (v < 0) throw FlagError("duration must be >= 0: '" + std::string(text) + "'");
  return std::chrono::nanoseconds(static_cast<int64_t>(std::llround(v)));
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string current;
  // Commas inside parentheses belong to call-style engine specs.
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back(Trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.emplace_back(Trim(current));
  for (const std::string& item : out) {
    if (item.empty()) throw FlagError("empty item in list '" + std::string(text) + "'");
  }
  return out;
}

EngineConfig ParseMarkEngine(std::string_view text, uint32_t default_workers) {
  const std::string spec = CallToColon(text);
  const std::vector<std::string_view> parts = Split(spec, ':');
  const std::string_view name = parts[0];
  if (name == "serial" && parts.size() == 1) return EngineConfig::Serial();
  if ((name == "worker_pool" || name == "workers") && parts.size() <= 2) {
    return EngineConfig::WorkerPool(
        parts.size() == 2 ? ParseU32(parts[1], "workers") : default_workers);
  }
  if (name == "frontier" && parts.size() <= 3) {
    const uint32_t lanes = parts.size() >= 2 ? ParseU32(parts[1], "lanes") : 384;
    const auto latency = parts.size() == 3 ? ParseDuration(parts[2])
                                           : std::chrono::nanoseconds(0);
    return EngineConfig::Frontier(lanes, latency);
  }
  throw FlagError("unknown mark engine '" + std::string(text) +
                  "' (serial, worker_pool[:T], frontier[:lanes[:latency]])");
}

EngineConfig ParseCopyEngine(std::string_view text) {
  const std::string spec = CallToColon(text);
  const std::vector<std::string_view> parts = Split(spec, ':');
  const std::string_view name = parts[0];
  if (name == "single" && parts.size() == 1) return CopyEngineSingle();
  if (name == "workers" && parts.size() == 2) {
    return CopyEngineWorkers(ParseU32(parts[1], "threads"));
  }
  if (name == "workers_blocked" && (parts.size() == 2 || parts.size() == 3)) {
    const uint64_t block =
        parts.size() == 3 ? ParseCount(parts[2]) : kDefaultBlockBytes;
    if (block == 0) throw FlagError("block size must be >= 1");
    return CopyEngineWorkersBlocked(ParseU32(parts[1], "threads"), block);
  }
  if (name == "bulk" && parts.size() <= 4) {
    const uint32_t lanes = parts.size() >= 2 ? ParseU32(parts[1], "lanes") : 384;
    const auto latency = parts.size() >= 3 ? ParseDuration(parts[2])
                                           : std::chrono::nanoseconds(0);
    uint32_t launchers = 1;
    if (parts.size() == 4) {
      std::string_view l = parts[3];
      if (!l.empty() && l[0] == 'x') l.remove_prefix(1);
      launchers = ParseU32(l, "launchers");
    }
    return CopyEngineBulk(lanes, latency, launchers);
  }
  throw FlagError("unknown copy engine '" + std::string(text) +
                  "' (single, workers:T, workers_blocked:T[:B], "
                  "bulk[:lanes[:latency[:xK]]])");
}

std::vector<EngineConfig> DefaultCopyEngines() {
  using std::chrono::microseconds;
  return {CopyEngineSingle(), CopyEngineWorkers(4), CopyEngineWorkersBlocked(4),
          CopyEngineBulk(384, microseconds(50)), CopyEngineBulk(384, {})};
}

Collector ParseCollector(std::string_view text,
                         std::chrono::nanoseconds bulk_latency) {
  const std::string_view s = Trim(text);
  Collector c;
  c.name = std::string(s);
  std::string_view count;
  bool bulk = false;
  if (s.starts_with("cpu")) {
    count = s.substr(3);
  } else if (s.starts_with("bulk")) {
    count = s.substr(4);
    bulk = true;
  } else {
    throw FlagError("unknown collector '" + std::string(s) + "' (cpuK or bulkK)");
  }
  if (count.empty()) throw FlagError("collector '" + std::string(s) + "' needs a thread count");
  const uint32_t k = ParseU32(count, "collector threads");
  // Marking and small-object copying stay on K CPU workers in both families;
  // bulk collectors hand large objects to the device-style copier.
  c.mark_engine = EngineConfig::WorkerPool(k);
  c.small_engine = CopyEngineWorkers(k);
  c.large_engine = bulk ? CopyEngineBulk(384, bulk_latency, k) : CopyEngineWorkers(k);
  return c;
}

std::string FormatDurationNs(std::chrono::nanoseconds d) {
  return std::to_string(d.count()) + "ns";
}

}  // namespace gclab::cli
