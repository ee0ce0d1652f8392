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
#ifndef USPANN_SEARCH_H_
#define USPANN_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uspann/dataset.h"
#include "uspann/distance.h"

namespace uspann {

struct QueryResult {
  std::vector<std::int32_t> ids;    // ascending distance, ties to lower id
  std::vector<double> distances;
  std::size_t candidate_count = 0;  // |C(q)|, one distance evaluation each

  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

// Incremented once per distance evaluation inside scan_candidates. Lets
// callers audit that the scan touches exactly |C(q)| points.
struct ScanCounter {
  std::uint64_t distance_evaluations = 0;
};

// Exact k-NN of q among the candidate ids by linear scan. Returns
// min(k, |candidates|) results.
QueryResult scan_candidates(const Dataset& ds, Metric metric,
                            std::span<const float> q,
                            std::span<const std::int32_t> candidates,
                            std::size_t k, ScanCounter* counter = nullptr);

// Common query surface of every partition-based index (learned, ensemble,
// hierarchical and the k-means baseline). Implementations are immutable
// after construction and safe for concurrent queries.
class Searcher {
 public:
  virtual ~Searcher() = default;

  virtual std::size_t num_bins() const = 0;
  virtual const Dataset& dataset() const = 0;
  virtual Metric metric() const = 0;

  // Points of the m' bins probed first for q, concatenated in probe order,
  // ascending within each bin. Nested in m'. Requires 1 <= m' <= num_bins().
  virtual std::vector<std::int32_t> candidate_set(std::span<const float> q,
                                                  std::size_t m_prime) const = 0;

  QueryResult query(std::span<const float> q, std::size_t k,
                    std::size_t m_prime, ScanCounter* counter = nullptr) const;

 protected:
  void check_query(std::span<const float> q, std::size_t m_prime) const;
};

}  // namespace uspann

#endif  // USPANN_SEARCH_H_
