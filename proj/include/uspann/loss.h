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
#ifndef USPANN_LOSS_H_
#define USPANN_LOSS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uspann/knn.h"
#include "uspann/model.h"

namespace uspann {

// How a point's target distribution is formed from its neighbors' outputs.
enum class TargetMode {
  kArgmax,  // histogram of the neighbors' argmax bins
  kSoft,    // mean of the neighbors' probability rows
};

// Row i is the distribution of batch point i's k' neighbors over the bins.
// neighbor_ids[r] names the dataset point whose probabilities sit in row r of
// neighbor_probs; every neighbor of every batch point must be present or a
// UsageError is thrown. Targets are constants for the optimizer.
Matrix neighbor_bin_distribution(std::span<const std::uint32_t> batch,
                                 const KnnMatrix& knn,
                                 std::span<const std::uint32_t> neighbor_ids,
                                 const Matrix& neighbor_probs,
                                 TargetMode mode = TargetMode::kArgmax);

struct QualityCost {
  double value = 0.0;               // mean over the batch of w_i * CE_i
  std::vector<double> per_point;    // w_i * CE_i
  Matrix grad_logits;               // w_i * (p_i - t_i) / b
};

// Weighted cross entropy between targets and softmax(logits), evaluated via
// log-sum-exp. Empty weights mean all ones.
QualityCost quality_cost(const Matrix& logits, const Matrix& targets,
                         std::span<const double> weights = {});

struct BalanceCost {
  double value = 0.0;       // -(sum of the window)
  std::size_t window = 0;   // entries selected per column, ceil(b / m)
  Matrix window_mask;       // 1 on selected entries, 0 elsewhere
  Matrix grad_probs;        // -window_mask
};

// Selects the ceil(b/m) largest probabilities of every column (ties to the
// lower row) and returns minus their sum. Requires b >= m.
BalanceCost balance_cost(const Matrix& probs);

struct LossBreakdown {
  double quality = 0.0;
  double balance = 0.0;
  double eta = 0.0;
  double total = 0.0;  // quality + eta * balance
  std::vector<double> per_point_quality;
  Matrix window_mask;
  Matrix grad_logits;  // combined gradient of total
};

LossBreakdown total_loss(const Matrix& logits, const Matrix& targets,
                         std::span<const double> weights, double eta);

}  // namespace uspann

#endif  // USPANN_LOSS_H_
