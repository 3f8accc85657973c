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

#include "gclab/worker_gang.h"

#include <algorithm>

#include "gclab/engine_config.h"
#include "gclab/object_ref.h"

namespace gclab {

EngineConfig EngineConfig::Serial(MarkMode mode) {
  EngineConfig cfg;
  cfg.kind = EngineKind::kSerial;
  cfg.mark_mode = mode;
  return cfg;
}

EngineConfig EngineConfig::WorkerPool(uint32_t workers, MarkMode mode) {
  EngineConfig cfg;
  cfg.kind = EngineKind::kWorkerPool;
  cfg.workers = workers;
  cfg.mark_mode = mode;
  return cfg;
}

EngineConfig EngineConfig::Frontier(uint32_t lanes,
                                    std::chrono::nanoseconds latency,
                                    MarkMode mode) {
  EngineConfig cfg;
  cfg.kind = EngineKind::kFrontier;
  cfg.lanes = lanes;
  cfg.launch_latency = latency;
  cfg.mark_mode = mode;
  return cfg;
}

void EngineConfig::Validate() const {
  if (workers == 0) throw InvalidArgument("engine workers must be >= 1");
  if (lanes == 0) throw InvalidArgument("engine lanes must be >= 1");
  if (launch_latency.count() < 0) {
    throw InvalidArgument("engine launch latency must be >= 0");
  }
}

const char* EngineKindName(EngineKind kind) {
  switch (kind) {
    case EngineKind::kSerial: return "serial";
    case EngineKind::kWorkerPool: return "worker_pool";
    case EngineKind::kFrontier: return "frontier";
  }
  return "?";
}

const char* MarkModeName(MarkMode mode) {
  return mode == MarkMode::kPlain ? "plain" : "cas";
}

EngineKind ParseEngineKind(const std::string& name) {
  if (name == "serial") return EngineKind::kSerial;
  if (name == "worker_pool" || name == "workers") return EngineKind::kWorkerPool;
  if (name == "frontier" || name == "bulk") return EngineKind::kFrontier;
  throw InvalidArgument("unknown engine kind '" + name + "'");
}

MarkMode ParseMarkMode(const std::string& name) {
  if (name == "plain") return MarkMode::kPlain;
  if (name == "cas") return MarkMode::kCas;
  throw InvalidArgument("unknown mark mode '" + name + "'");
}

uint32_t HostThreadsForLanes(uint32_t lanes) {
  const uint32_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::max(1u, std::min(lanes, hw));
}

WorkerGang::WorkerGang(uint32_t workers) : workers_(std::max(1u, workers)) {
  threads_.reserve(workers_ - 1);
  for (uint32_t id = 1; id < workers_; ++id) {
    threads_.emplace_back([this, id] { Loop(id); });
  }
}

WorkerGang::~WorkerGang() {
  {
    std::lock_guard<std::mutex> guard(lock_);
    shutdown_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerGang::Run(const std::function<void(uint32_t)>& job) {
  if (workers_ == 1) {
    job(0);
    return;
  }
  {
    std::lock_guard<std::mutex> guard(lock_);
    job_ = &job;
    pending_ = workers_ - 1;
    error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  std::exception_ptr local;
  try {
    job(0);
  } catch (...) {
    local = std::current_exception();
  }
  std::unique_lock<std::mutex> guard(lock_);
  done_cv_.wait(guard, [this] { return pending_ == 0; });
  job_ = nullptr;
  if (local) std::rethrow_exception(local);
  if (error_) std::rethrow_exception(error_);
}

void WorkerGang::Loop(uint32_t id) {
  uint64_t seen = 0;
  for (;;) {
    const std::function<void(uint32_t)>* job;
    {
      std::unique_lock<std::mutex> guard(lock_);
      start_cv_.wait(guard, [&] { return shutdown_ || generation_ != seen; });
      if (shutdown_) return;
      seen = generation_;
      job = job_;
    }
    std::exception_ptr err;
    try {
      (*job)(id);
    } catch (...) {
      err = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> guard(lock_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

void SpinFor(std::chrono::nanoseconds d) {
  if (d.count() <= 0) return;
  const auto until = std::chrono::steady_clock::now() + d;
  while (std::chrono::steady_clock::now() < until) {
  }
}

}  // namespace gclab
