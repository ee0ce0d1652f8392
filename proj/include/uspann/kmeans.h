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
#ifndef USPANN_KMEANS_H_
#define USPANN_KMEANS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "uspann/model.h"
#include "uspann/partition.h"
#include "uspann/search.h"

namespace uspann {

struct KMeansPartition {
  Matrix centroids;  // m x d
  Partition partition;
  std::size_t iterations = 0;  // Lloyd iterations actually run
};

// Nearest centroid per point, ties to the lower centroid id.
std::vector<std::int32_t> assign_to_nearest(const Dataset& ds,
                                            const Matrix& centroids);

// Cluster means; clusters without points keep their previous centroid.
Matrix recompute_centroids(const Dataset& ds,
                           std::span<const std::int32_t> assignment,
                           const Matrix& previous);

// Total squared distance of every point to its assigned centroid.
double within_cluster_ss(const Dataset& ds, const Matrix& centroids,
                         std::span<const std::int32_t> assignment);

// k-means++ seeding followed by Lloyd iterations until the assignment stops
// changing or max_iters is reached. An empty cluster takes over the point of
// the largest cluster farthest from that cluster's centroid.
KMeansPartition kmeans_partition(const Dataset& ds, std::size_t m,
                                 std::size_t max_iters, std::uint64_t seed);

// The baseline behind the common probing interface: bins are visited by
// ascending centroid distance, ties to the lower centroid id.
class KMeansIndex : public Searcher {
 public:
  KMeansIndex(KMeansPartition part, std::shared_ptr<const Dataset> ds,
              Metric metric = Metric::kEuclidean);

  std::size_t num_bins() const override { return part_.partition.bins; }
  const Dataset& dataset() const override { return *dataset_; }
  Metric metric() const override { return metric_; }
  const KMeansPartition& kmeans() const { return part_; }

  std::vector<std::uint32_t> probe_order(std::span<const float> q) const;
  std::vector<std::int32_t> candidate_set(std::span<const float> q,
                                          std::size_t m_prime) const override;

 private:
  KMeansPartition part_;
  std::shared_ptr<const Dataset> dataset_;
  Metric metric_;
};

}  // namespace uspann

#endif  // USPANN_KMEANS_H_
