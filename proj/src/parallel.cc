// Copyright 2026 The DGM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dgm/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dgm {

size_t ResolveJobs(size_t requested) {
  size_t jobs = requested;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DGM_JOBS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) jobs = std::min(jobs, static_cast<size_t>(cap));
    } catch (const std::exception&) {
      // Ignore malformed values.
    }
  }
  return std::max<size_t>(1, jobs);
}

void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)>& fn) {
  jobs = std::min(std::max<size_t>(1, jobs), n);
  if (jobs <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dgm
