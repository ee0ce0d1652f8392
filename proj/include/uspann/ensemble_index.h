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
#ifndef USPANN_ENSEMBLE_INDEX_H_
#define USPANN_ENSEMBLE_INDEX_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "uspann/flat_index.h"
#include "uspann/knn.h"
#include "uspann/trainer.h"

namespace uspann {

enum class EnsembleQueryMode : std::uint32_t {
  kMostConfident = 0,  // candidate set of the member with the highest max-probability
  kUnion = 1,          // union of every member's candidate set (experimental)
};

struct EnsembleWeights {
  std::vector<std::size_t> misplaced;  // neighbors outside the point's bin
  std::vector<double> weights;         // misplaced * prev, rescaled to mean 1
  bool saturated = false;              // every new weight is zero
};

// Boosting update: a point's next weight is the number of its k' neighbors
// placed in another bin, times its previous weight.
EnsembleWeights compute_ensemble_weights(const Partition& partition,
                                         const KnnMatrix& knn,
                                         std::span<const double> prev_weights);

// Complementary partitions trained sequentially on re-weighted points.
class EnsembleIndex : public Searcher {
 public:
  // Throws ParameterError when members is empty or members disagree on the
  // dataset or bin count.
  EnsembleIndex(std::vector<FlatIndex> members,
                std::vector<std::vector<double>> weight_history,
                EnsembleQueryMode mode = EnsembleQueryMode::kMostConfident);

  std::size_t num_bins() const override { return members_.front().num_bins(); }
  const Dataset& dataset() const override { return members_.front().dataset(); }
  Metric metric() const override { return members_.front().metric(); }

  std::size_t size() const { return members_.size(); }
  const std::vector<FlatIndex>& members() const { return members_; }
  // Row j holds the point weights member j was trained with.
  const std::vector<std::vector<double>>& weight_history() const {
    return weight_history_;
  }
  EnsembleQueryMode mode() const { return mode_; }
  void set_mode(EnsembleQueryMode mode) { mode_ = mode; }

  std::vector<double> confidences(std::span<const float> q) const;
  // Highest confidence, ties to the lowest member index.
  std::size_t select_member(std::span<const float> q) const;

  std::vector<std::int32_t> candidate_set(std::span<const float> q,
                                          std::size_t m_prime) const override;

 private:
  std::vector<FlatIndex> members_;
  std::vector<std::vector<double>> weight_history_;
  EnsembleQueryMode mode_;
};

// Trains up to e members; member j uses seed cfg.seed + j and the weights
// produced by member j-1 (uniform for the first). Stops early when the
// weights saturate.
EnsembleIndex train_ensemble(std::shared_ptr<const Dataset> ds,
                             const KnnMatrix& knn, const Architecture& arch,
                             const TrainConfig& cfg, std::size_t e,
                             Metric metric = Metric::kEuclidean);

}  // namespace uspann

#endif  // USPANN_ENSEMBLE_INDEX_H_
