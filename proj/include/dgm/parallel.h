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

#ifndef DGM_PARALLEL_H_
#define DGM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dgm {

// Worker count: `requested` (0 means hardware concurrency), capped by the
// DGM_JOBS environment variable when it holds a positive integer.
size_t ResolveJobs(size_t requested);

// Runs fn(0..n-1) on up to `jobs` threads. The first exception thrown by
// any task is rethrown after all workers finish.
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)>& fn);

}  // namespace dgm

#endif  // DGM_PARALLEL_H_
