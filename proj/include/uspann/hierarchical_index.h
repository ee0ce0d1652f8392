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
#ifndef USPANN_HIERARCHICAL_INDEX_H_
#define USPANN_HIERARCHICAL_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "uspann/knn.h"
#include "uspann/partition.h"
#include "uspann/search.h"
#include "uspann/trainer.h"

namespace uspann {

// One node of the partitioning tree. Internal nodes own a model whose bin j
// leads to children[j]; leaves own one global leaf bin.
struct HierarchyNode {
  std::optional<PartitionerModel> model;
  std::vector<std::int32_t> children;
  std::int32_t leaf_id = -1;
  std::uint32_t depth = 0;
  bool early_leaf = false;  // cut off above the last level for lack of points
  std::uint64_t point_count = 0;

  bool is_leaf() const { return !model.has_value(); }
};

// Tree of partitioners with fanouts (m_1, ..., m_l). A query's probability
// for a leaf bin is the product of the bin probabilities along its path;
// probing visits leaves by descending probability, ties to the lower leaf.
class HierarchicalIndex : public Searcher {
 public:
  // nodes[0] is the root. Throws ParameterError on malformed trees or a
  // leaf partition that disagrees with the node structure.
  HierarchicalIndex(std::vector<std::size_t> fanouts,
                    std::vector<HierarchyNode> nodes, Partition leaves,
                    std::shared_ptr<const Dataset> ds, Metric metric);

  std::size_t num_bins() const override { return leaves_.bins; }
  const Dataset& dataset() const override { return *dataset_; }
  std::shared_ptr<const Dataset> dataset_ptr() const { return dataset_; }
  Metric metric() const override { return metric_; }

  const std::vector<std::size_t>& fanouts() const { return fanouts_; }
  const std::vector<HierarchyNode>& nodes() const { return nodes_; }
  const Partition& leaves() const { return leaves_; }
  std::size_t model_count() const;
  std::size_t early_leaf_count() const;

  // Product-rule leaf distribution for q; sums to 1.
  std::vector<double> leaf_probabilities(std::span<const float> q) const;

  std::vector<std::int32_t> candidate_set(std::span<const float> q,
                                          std::size_t m_prime) const override;

 private:
  void accumulate(std::size_t node, double mass, std::span<const float> q,
                  std::vector<double>& out) const;

  std::vector<std::size_t> fanouts_;
  std::vector<HierarchyNode> nodes_;
  Partition leaves_;
  std::shared_ptr<const Dataset> dataset_;
  Metric metric_;
};

// Trains the root on all points, then recursively trains one child model per
// non-empty bin on that bin's points with a k'-NN matrix recomputed inside
// the subset. A node with fewer than max(fanout, k'+1) points becomes a leaf
// early. arch supplies kind, hidden width and dropout; bins come from
// fanouts. Node i trains with seed cfg.seed + i (preorder numbering).
// root_knn, if given, must be the k'-NN matrix of the full dataset.
HierarchicalIndex build_hierarchical(std::shared_ptr<const Dataset> ds,
                                     const Architecture& arch,
                                     const TrainConfig& cfg,
                                     std::vector<std::size_t> fanouts,
                                     Metric metric = Metric::kEuclidean,
                                     const KnnMatrix* root_knn = nullptr);

}  // namespace uspann

#endif  // USPANN_HIERARCHICAL_INDEX_H_
