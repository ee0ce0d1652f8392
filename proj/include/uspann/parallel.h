// Copyright 2026 The uspann Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef USPANN_PARALLEL_H_
#define USPANN_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace uspann {

// Number of worker threads to use. Defaults to the hardware concurrency and
// is capped by the USPANN_THREADS environment variable when it is set.
std::size_t worker_count();

// Runs body(i) for every i in [0, n). Iterations are split into contiguous
// chunks, one per worker. body must only write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace uspann

#endif  // USPANN_PARALLEL_H_
