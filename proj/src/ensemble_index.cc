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
#include "uspann/ensemble_index.h"

#include <algorithm>
#include <string>

#include "uspann/error.h"

namespace uspann {

EnsembleWeights compute_ensemble_weights(const Partition& partition,
                                         const KnnMatrix& knn,
                                         std::span<const double> prev_weights) {
  const std::size_t n = partition.size();
  if (knn.n != n || prev_weights.size() != n) {
    throw ParameterError("ensemble weights: partition, k'-NN matrix and "
                         "previous weights must cover the same points");
  }
  EnsembleWeights out;
  out.misplaced.resize(n);
  out.weights.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (prev_weights[i] < 0.0) throw ParameterError("negative point weight");
    std::size_t misplaced = 0;
    for (std::int32_t nb : knn.row(i)) {
      if (partition.assignment[static_cast<std::size_t>(nb)] != partition.assignment[i]) {
        ++misplaced;
      }
    }
    out.misplaced[i] = misplaced;
    out.weights[i] = static_cast<double>(misplaced) * prev_weights[i];
    sum += out.weights[i];
  }
  if (sum == 0.0) {
    out.saturated = true;
    return out;
  }
  const double scale = static_cast<double>(n) / sum;
  for (double& w : out.weights) w *= scale;
  return out;
}

EnsembleIndex::EnsembleIndex(std::vector<FlatIndex> members,
                             std::vector<std::vector<double>> weight_history,
                             EnsembleQueryMode mode)
    : members_(std::move(members)),
      weight_history_(std::move(weight_history)),
      mode_(mode) {
  if (members_.empty()) throw ParameterError("ensemble needs at least one member");
  for (const auto& m : members_) {
    if (m.dataset_ptr() != members_.front().dataset_ptr() ||
        m.num_bins() != members_.front().num_bins() ||
        m.metric() != members_.front().metric()) {
      throw ParameterError("ensemble members disagree on dataset, bins or metric");
    }
  }
  if (weight_history_.size() != members_.size()) {
    throw ParameterError("one weight row per ensemble member required");
  }
  for (const auto& row : weight_history_) {
    if (row.size() != dataset().size()) {
      throw ParameterError("weight row length does not match the dataset");
    }
  }
}

std::vector<double> EnsembleIndex::confidences(std::span<const float> q) const {
  std::vector<double> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.confidence(q));
  return out;
}

std::size_t EnsembleIndex::select_member(std::span<const float> q) const {
  const auto conf = confidences(q);
  std::size_t best = 0;
  for (std::size_t j = 1; j < conf.size(); ++j) {
    if (conf[j] > conf[best]) best = j;
  }
  return best;
}

std::vector<std::int32_t> EnsembleIndex::candidate_set(
    std::span<const float> q, std::size_t m_prime) const {
  check_query(q, m_prime);
  if (mode_ == EnsembleQueryMode::kMostConfident) {
    return members_[select_member(q)].candidate_set(q, m_prime);
  }
  std::vector<std::uint8_t> seen(dataset().size(), 0);
  std::vector<std::int32_t> out;
  for (const auto& m : members_) {
    for (std::int32_t id : m.candidate_set(q, m_prime)) {
      if (!seen[static_cast<std::size_t>(id)]) {
        seen[static_cast<std::size_t>(id)] = 1;
        out.push_back(id);
      }
    }
  }
  return out;
}

EnsembleIndex train_ensemble(std::shared_ptr<const Dataset> ds,
                             const KnnMatrix& knn, const Architecture& arch,
                             const TrainConfig& cfg, std::size_t e,
                             Metric metric) {
  if (e < 1) throw ParameterError("ensemble size must be >= 1");
  if (!ds) throw ParameterError("ensemble needs a dataset");
  std::vector<FlatIndex> members;
  std::vector<std::vector<double>> history;
  std::vector<double> weights(ds->size(), 1.0);
  for (std::size_t j = 0; j < e; ++j) {
    TrainConfig member_cfg = cfg;
    member_cfg.seed = cfg.seed + j;
    member_cfg.point_weights = weights;
    TrainResult trained = train(*ds, knn, arch, member_cfg);
    members.emplace_back(std::move(trained.model), ds, metric);
    history.push_back(weights);
    if (j + 1 == e) break;
    EnsembleWeights next =
        compute_ensemble_weights(members.back().partition(), knn, weights);
    if (next.saturated) break;
    weights = std::move(next.weights);
  }
  return EnsembleIndex(std::move(members), std::move(history));
}

}  // namespace uspann
