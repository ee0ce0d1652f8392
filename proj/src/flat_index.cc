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
#include "uspann/flat_index.h"

#include <algorithm>

#include "uspann/error.h"

namespace uspann {

FlatIndex::FlatIndex(PartitionerModel model, std::shared_ptr<const Dataset> ds,
                     Metric metric)
    : model_(std::move(model)), dataset_(std::move(ds)), metric_(metric) {
  if (!dataset_) throw ParameterError("index needs a dataset");
  if (model_.arch().input_dim != dataset_->dim()) {
    throw ParameterError("model input dimension does not match the dataset");
  }
  model_.clear_recorded_forward();
  partition_ = build_partition(model_, *dataset_);
}

FlatIndex::FlatIndex(PartitionerModel model, Partition partition,
                     std::shared_ptr<const Dataset> ds, Metric metric)
    : model_(std::move(model)),
      partition_(std::move(partition)),
      dataset_(std::move(ds)),
      metric_(metric) {
  if (!dataset_) throw ParameterError("index needs a dataset");
  if (model_.arch().input_dim != dataset_->dim() ||
      partition_.size() != dataset_->size() ||
      partition_.bins != model_.bins()) {
    throw ParameterError("model, partition and dataset shapes disagree");
  }
  model_.clear_recorded_forward();
}

std::vector<double> FlatIndex::bin_probabilities(
    std::span<const float> q) const {
  return model_.probabilities(q);
}

double FlatIndex::confidence(std::span<const float> q) const {
  const auto p = bin_probabilities(q);
  return *std::max_element(p.begin(), p.end());
}

std::vector<std::int32_t> gather_bins(const Partition& partition,
                                      std::span<const BinScore> bins) {
  std::size_t total = 0;
  for (const auto& b : bins) total += partition.bin_size(b.bin);
  std::vector<std::int32_t> out;
  out.reserve(total);
  for (const auto& b : bins) {
    auto members = partition.bin(b.bin);
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

std::vector<std::int32_t> FlatIndex::candidate_set(std::span<const float> q,
                                                   std::size_t m_prime) const {
  check_query(q, m_prime);
  return gather_bins(partition_, predict_bins(model_, q, m_prime));
}

}  // namespace uspann
