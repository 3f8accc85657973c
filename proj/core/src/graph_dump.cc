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

#include "gclab/graph_dump.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace gclab {
namespace {

template <typename T>
void Put(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>(static_cast<uint64_t>(v) >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T Get(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw InvalidArgument("graph dump truncated");
  }
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= uint64_t{buf[i]} << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void WriteGraphDump(std::ostream& out, const GraphDump& dump) {
  const auto& cfg = dump.config;
  const auto& shape = dump.shape;
  if (shape.offsets.size() != cfg.n_objects + 1 ||
      shape.offsets.back() != shape.targets.size()) {
    throw InvalidArgument("graph dump shape does not match its config");
  }
  out.write(kGraphDumpMagic, sizeof(kGraphDumpMagic));
  Put<uint32_t>(out, kGraphDumpVersion);
  Put<uint64_t>(out, cfg.n_objects);
  Put<uint64_t>(out, std::bit_cast<uint64_t>(cfg.avg_out_degree));
  Put<uint64_t>(out, cfg.seed);
  Put<uint64_t>(out, cfg.root_count);
  Put<uint64_t>(out, cfg.payload_size);
  Put<uint64_t>(out, shape.targets.size());
  for (uint64_t o : shape.offsets) Put<uint64_t>(out, o);
  for (uint32_t t : shape.targets) Put<uint32_t>(out, t);
  if (!out) throw GcLabError("graph dump write failed");
}

GraphDump ReadGraphDump(std::istream& in) {
  char magic[sizeof(kGraphDumpMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kGraphDumpMagic, sizeof(magic)) != 0) {
    throw InvalidArgument("not a graph dump (bad magic)");
  }
  const uint32_t version = Get<uint32_t>(in);
  if (version != kGraphDumpVersion) {
    throw InvalidArgument("unsupported graph dump version " +
                          std::to_string(version));
  }
  GraphDump dump;
  auto& cfg = dump.config;
  cfg.n_objects = Get<uint64_t>(in);
  cfg.avg_out_degree = std::bit_cast<double>(Get<uint64_t>(in));
  cfg.seed = Get<uint64_t>(in);
  cfg.root_count = Get<uint64_t>(in);
  cfg.payload_size = Get<uint64_t>(in);
  const uint64_t edges = Get<uint64_t>(in);
  if (cfg.n_objects == 0 || cfg.root_count > cfg.n_objects ||
      cfg.n_objects > 0xFFFFFFF0ull) {
    throw InvalidArgument("graph dump header is inconsistent");
  }
  dump.shape.offsets.resize(cfg.n_objects + 1);
  for (auto& o : dump.shape.offsets) o = Get<uint64_t>(in);
  if (dump.shape.offsets.front() != 0 || dump.shape.offsets.back() != edges) {
    throw InvalidArgument("graph dump offsets are inconsistent");
  }
  for (uint64_t i = 0; i < cfg.n_objects; ++i) {
    if (dump.shape.offsets[i + 1] < dump.shape.offsets[i]) {
      throw InvalidArgument("graph dump offsets are not monotone");
    }
  }
  dump.shape.targets.resize(edges);
  for (auto& t : dump.shape.targets) {
    t = Get<uint32_t>(in);
    if (t >= cfg.n_objects) throw InvalidArgument("graph dump edge out of range");
  }
  return dump;
}

void WriteGraphDumpFile(const std::string& path, const GraphDump& dump) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GcLabError("cannot open '" + path + "' for writing");
  WriteGraphDump(out, dump);
}

GraphDump ReadGraphDumpFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GcLabError("cannot open '" + path + "'");
  return ReadGraphDump(in);
}

}  // namespace gclab
