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
#include "uspann/search.h"

#include <algorithm>
#include <queue>
#include <string>
#include <utility>

#include "uspann/error.h"

namespace uspann {

QueryResult scan_candidates(const Dataset& ds, Metric metric,
                            std::span<const float> q,
                            std::span<const std::int32_t> candidates,
                            std::size_t k, ScanCounter* counter) {
  if (k < 1) throw ParameterError("k must be >= 1");
  using Entry = std::pair<double, std::int32_t>;  // (squared distance, id)
  std::priority_queue<Entry> heap;                // largest entry on top
  for (std::int32_t id : candidates) {
    const Entry e{squared_l2(q, ds.row(static_cast<std::size_t>(id))), id};
    if (counter) ++counter->distance_evaluations;
    if (heap.size() < k) {
      heap.push(e);
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
  }
  std::vector<Entry> best;
  best.reserve(heap.size());
  while (!heap.empty()) {
    best.push_back(heap.top());
    heap.pop();
  }
  std::reverse(best.begin(), best.end());
  QueryResult out;
  out.candidate_count = candidates.size();
  for (const auto& [d2, id] : best) {
    out.ids.push_back(id);
    out.distances.push_back(from_squared(metric, d2));
  }
  return out;
}

void Searcher::check_query(std::span<const float> q,
                           std::size_t m_prime) const {
  if (q.size() != dataset().dim()) {
    throw ParameterError("query has dimension " + std::to_string(q.size()) +
                         ", index expects " + std::to_string(dataset().dim()));
  }
  if (m_prime < 1 || m_prime > num_bins()) {
    throw ParameterError("m' must satisfy 1 <= m' <= " +
                         std::to_string(num_bins()) + ", got " +
                         std::to_string(m_prime));
  }
}

QueryResult Searcher::query(std::span<const float> q, std::size_t k,
                            std::size_t m_prime, ScanCounter* counter) const {
  const auto candidates = candidate_set(q, m_prime);
  return scan_candidates(dataset(), metric(), q, candidates, k, counter);
}

}  // namespace uspann
