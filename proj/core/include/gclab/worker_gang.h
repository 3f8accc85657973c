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

#ifndef GCLAB_WORKER_GANG_H_
#define GCLAB_WORKER_GANG_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gclab {

// Fixed set of threads that run one job at a time. Run(job) executes
// job(worker_id) on every worker, worker 0 being the calling thread, and
// returns once all of them are done. The first exception thrown by a worker
// is rethrown from Run.
class WorkerGang {
 public:
  explicit WorkerGang(uint32_t workers);
  ~WorkerGang();
  WorkerGang(const WorkerGang&) = delete;
  WorkerGang& operator=(const WorkerGang&) = delete;

  uint32_t size() const { return workers_; }
  void Run(const std::function<void(uint32_t)>& job);

 private:
  void Loop(uint32_t id);

  uint32_t workers_;
  std::vector<std::thread> threads_;
  std::mutex lock_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(uint32_t)>* job_ = nullptr;
  uint64_t generation_ = 0;
  uint32_t pending_ = 0;
  bool shutdown_ = false;
  std::exception_ptr error_;
};

// Busy-waits for `d`; sleeping is far too coarse for microsecond latencies.
void SpinFor(std::chrono::nanoseconds d);

// Monotonic stopwatch in nanoseconds.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::chrono::nanoseconds Elapsed() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Splits [0, count) into `parts` contiguous near-equal ranges.
inline std::pair<uint64_t, uint64_t> PartitionRange(uint64_t count,
                                                    uint32_t parts,
                                                    uint32_t part) {
  const uint64_t base = count / parts;
  const uint64_t extra = count % parts;
  const uint64_t begin = part * base + std::min<uint64_t>(part, extra);
  return {begin, begin + base + (part < extra ? 1 : 0)};
}

}  // namespace gclab

#endif  // GCLAB_WORKER_GANG_H_
