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
#ifndef USPANN_METRICS_H_
#define USPANN_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "uspann/knn.h"
#include "uspann/partition.h"
#include "uspann/search.h"

namespace uspann {

// |result ∩ truth| / |truth|.
double recall_at_k(std::span<const std::int32_t> result,
                   std::span<const std::int32_t> truth);

struct CurvePoint {
  std::size_t m_prime = 0;
  double mean_candidate_count = 0.0;
  double recall_at_k = 0.0;
};

// Mean recall@k and mean candidate count over all queries for every m'.
// Queries run in parallel; the means are summed in query order, so results
// do not depend on the thread count. The ground truth must come from the
// searcher's dataset and cover at least k neighbors per query.
std::vector<CurvePoint> sweep_curve(const Searcher& index,
                                    const Dataset& queries,
                                    const GroundTruth& gt, std::size_t k,
                                    std::span<const std::size_t> m_primes);

// Every m' in [1, m] for m <= 32, otherwise powers of two up to m plus m.
std::vector<std::size_t> default_m_prime_grid(std::size_t m);

struct BinBalance {
  std::size_t max_bin = 0;
  std::size_t min_bin = 0;
  double max_over_ideal = 0.0;  // max_bin / (n / m)
};

BinBalance bin_balance(const Partition& partition);

// Sum over bins of the bin's majority-label count, divided by n.
double cluster_purity(const Partition& partition,
                      std::span<const std::int32_t> labels);

struct CurveRow {
  std::string method;
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  CurvePoint point;
};

// Columns: method,m,m_prime,mean_candidates,recall,k,seed
void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);

}  // namespace uspann

#endif  // USPANN_METRICS_H_
