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
#include "uspann/loss.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uspann/error.h"

namespace uspann {

Matrix neighbor_bin_distribution(std::span<const std::uint32_t> batch,
                                 const KnnMatrix& knn,
                                 std::span<const std::uint32_t> neighbor_ids,
                                 const Matrix& neighbor_probs,
                                 TargetMode mode) {
  if (neighbor_ids.size() != static_cast<std::size_t>(neighbor_probs.rows())) {
    throw UsageError("neighbor id list does not match the probability rows");
  }
  const long m = neighbor_probs.cols();
  std::vector<std::int32_t> row_of(knn.n, -1);
  for (std::size_t r = 0; r < neighbor_ids.size(); ++r) {
    if (neighbor_ids[r] >= knn.n) throw UsageError("neighbor id out of range");
    row_of[neighbor_ids[r]] = static_cast<std::int32_t>(r);
  }
  Matrix targets = Matrix::Zero(static_cast<long>(batch.size()), m);
  const double share = 1.0 / static_cast<double>(knn.k);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i] >= knn.n) throw UsageError("batch index out of range");
    for (std::int32_t nb : knn.row(batch[i])) {
      const std::int32_t r = row_of[static_cast<std::size_t>(nb)];
      if (r < 0) {
        throw UsageError("probabilities missing for neighbor " +
                         std::to_string(nb) + " of point " +
                         std::to_string(batch[i]));
      }
      if (mode == TargetMode::kArgmax) {
        long best = 0;
        neighbor_probs.row(r).maxCoeff(&best);
        targets(static_cast<long>(i), best) += share;
      } else {
        targets.row(static_cast<long>(i)) += share * neighbor_probs.row(r);
      }
    }
  }
  return targets;
}

QualityCost quality_cost(const Matrix& logits, const Matrix& targets,
                         std::span<const double> weights) {
  const long b = logits.rows();
  const long m = logits.cols();
  if (targets.rows() != b || targets.cols() != m) {
    throw ParameterError("quality cost: logits and targets differ in shape");
  }
  if (!weights.empty() && weights.size() != static_cast<std::size_t>(b)) {
    throw ParameterError("quality cost: one weight per batch row required");
  }
  QualityCost out;
  out.per_point.resize(static_cast<std::size_t>(b));
  out.grad_logits.resize(b, m);
  double sum = 0.0;
  for (long i = 0; i < b; ++i) {
    const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
    if (w < 0.0) throw ParameterError("quality cost: negative weight");
    const double mx = logits.row(i).maxCoeff();
    double z = 0.0;
    for (long j = 0; j < m; ++j) z += std::exp(logits(i, j) - mx);
    const double lse = mx + std::log(z);
    double ce = 0.0;
    for (long j = 0; j < m; ++j) {
      const double t = targets(i, j);
      if (t != 0.0) ce -= t * (logits(i, j) - lse);
    }
    out.per_point[static_cast<std::size_t>(i)] = w * ce;
    sum += w * ce;
    for (long j = 0; j < m; ++j) {
      const double p = std::exp(logits(i, j) - lse);
      out.grad_logits(i, j) = w * (p - targets(i, j)) / static_cast<double>(b);
    }
  }
  out.value = sum / static_cast<double>(b);
  return out;
}

BalanceCost balance_cost(const Matrix& probs) {
  const long b = probs.rows();
  const long m = probs.cols();
  if (b < m) {
    throw ParameterError("balance cost needs batch size >= bins, got b=" +
                         std::to_string(b) + " m=" + std::to_string(m));
  }
  BalanceCost out;
  out.window = static_cast<std::size_t>((b + m - 1) / m);
  out.window_mask = Matrix::Zero(b, m);
  std::vector<long> rows(static_cast<std::size_t>(b));
  double sum = 0.0;
  for (long j = 0; j < m; ++j) {
    std::iota(rows.begin(), rows.end(), 0L);
    std::partial_sort(rows.begin(), rows.begin() + static_cast<long>(out.window),
                      rows.end(), [&](long a, long c) {
                        return probs(a, j) > probs(c, j) ||
                               (probs(a, j) == probs(c, j) && a < c);
                      });
    for (std::size_t r = 0; r < out.window; ++r) {
      out.window_mask(rows[r], j) = 1.0;
      sum += probs(rows[r], j);
    }
  }
  out.value = -sum;
  out.grad_probs = -out.window_mask;
  return out;
}

LossBreakdown total_loss(const Matrix& logits, const Matrix& targets,
                         std::span<const double> weights, double eta) {
  if (!(eta >= 0.0)) throw ParameterError("eta must be >= 0");
  QualityCost q = quality_cost(logits, targets, weights);
  const Matrix probs = softmax_rows(logits);
  BalanceCost s = balance_cost(probs);
  LossBreakdown out;
  out.quality = q.value;
  out.balance = s.value;
  out.eta = eta;
  out.total = q.value + eta * s.value;
  out.per_point_quality = std::move(q.per_point);
  out.grad_logits = q.grad_logits;
  if (eta != 0.0) {
    out.grad_logits += eta * softmax_backward(probs, s.grad_probs);
  }
  out.window_mask = std::move(s.window_mask);
  return out;
}

}  // namespace uspann
