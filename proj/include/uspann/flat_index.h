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
#ifndef USPANN_FLAT_INDEX_H_
#define USPANN_FLAT_INDEX_H_

#include <memory>
#include <span>
#include <vector>

#include "uspann/dataset.h"
#include "uspann/model.h"
#include "uspann/partition.h"
#include "uspann/search.h"

namespace uspann {

// A single trained partitioner over a dataset. Queries probe the m' most
// probable bins of the model's output.
class FlatIndex : public Searcher {
 public:
  // Runs argmax inference over ds to build the partition.
  FlatIndex(PartitionerModel model, std::shared_ptr<const Dataset> ds,
            Metric metric = Metric::kEuclidean);
  // Adopts a precomputed partition (deserialization).
  FlatIndex(PartitionerModel model, Partition partition,
            std::shared_ptr<const Dataset> ds, Metric metric);

  std::size_t num_bins() const override { return partition_.bins; }
  const Dataset& dataset() const override { return *dataset_; }
  std::shared_ptr<const Dataset> dataset_ptr() const { return dataset_; }
  Metric metric() const override { return metric_; }

  const PartitionerModel& model() const { return model_; }
  const Partition& partition() const { return partition_; }

  std::vector<double> bin_probabilities(std::span<const float> q) const;
  // Maximum bin probability for q.
  double confidence(std::span<const float> q) const;

  std::vector<std::int32_t> candidate_set(std::span<const float> q,
                                          std::size_t m_prime) const override;

 private:
  PartitionerModel model_;
  Partition partition_;
  std::shared_ptr<const Dataset> dataset_;
  Metric metric_;
};

// Union of the given bins' lookup lists in the given order.
std::vector<std::int32_t> gather_bins(const Partition& partition,
                                      std::span<const BinScore> bins);

}  // namespace uspann

#endif  // USPANN_FLAT_INDEX_H_
