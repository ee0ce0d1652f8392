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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "uspann/error.h"
#include "uspann/loss.h"

namespace uspann {
namespace {

Matrix rows_of(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows.begin()->size()));
  long i = 0;
  for (const auto& r : rows) {
    long j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix random_logits(long b, long m, std::uint64_t seed, double scale = 2.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  Matrix z(b, m);
  for (long i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
  return z;
}

// Random rows with entries in multiples of 1/k.
Matrix random_targets(long b, long m, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix t = Matrix::Zero(b, m);
  for (long i = 0; i < b; ++i) {
    for (int r = 0; r < k; ++r) t(i, static_cast<long>(rng() % m)) += 1.0 / k;
  }
  return t;
}

KnnMatrix knn_of(std::size_t n, std::size_t k, std::vector<std::int32_t> ids) {
  KnnMatrix m;
  m.n = n;
  m.k = k;
  m.neighbors = std::move(ids);
  return m;
}

TEST(Targets, AllNeighborsInOneBin) {
  KnnMatrix knn = knn_of(4, 3, {1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2});
  std::vector<std::uint32_t> batch{0};
  std::vector<std::uint32_t> ids{1, 2, 3};
  Matrix probs = rows_of({{0.1, 0.1, 0.7, 0.1}, {0, 0, 1, 0}, {0.2, 0.2, 0.4, 0.2}});
  Matrix t = neighbor_bin_distribution(batch, knn, ids, probs);
  EXPECT_EQ(t, rows_of({{0, 0, 1, 0}}));
}

TEST(Targets, CountsArgmaxes) {
  // Point 0 has neighbors 1..4 whose argmaxes are {0, 0, 1, 3}.
  KnnMatrix knn;
  knn.n = 5;
  knn.k = 4;
  knn.neighbors.assign(20, 0);
  for (int j = 0; j < 4; ++j) knn.neighbors[j] = j + 1;
  std::vector<std::uint32_t> batch{0};
  std::vector<std::uint32_t> ids{4, 3, 2, 1};
  Matrix probs = rows_of({{0, 0, 0, 1}, {0, 0.9, 0.1, 0}, {0.6, 0.4, 0, 0},
                          {0.5, 0.2, 0.2, 0.1}});
  Matrix t = neighbor_bin_distribution(batch, knn, ids, probs);
  EXPECT_EQ(t, rows_of({{0.5, 0.25, 0, 0.25}}));
}

TEST(Targets, RowsSumToOneAndSoftMode) {
  const std::size_t n = 30, k = 5, m = 6;
  std::mt19937_64 rng(3);
  KnnMatrix knn;
  knn.n = n;
  knn.k = k;
  for (std::size_t i = 0; i < n * k; ++i) {
    knn.neighbors.push_back(static_cast<std::int32_t>(rng() % n));
  }
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  Matrix probs = softmax_rows(random_logits(n, m, 4));
  for (auto mode : {TargetMode::kArgmax, TargetMode::kSoft}) {
    Matrix t = neighbor_bin_distribution(all, knn, all, probs, mode);
    for (long i = 0; i < t.rows(); ++i) EXPECT_NEAR(t.row(i).sum(), 1.0, 1e-12);
  }
  Matrix hard = neighbor_bin_distribution(all, knn, all, probs);
  for (long i = 0; i < hard.size(); ++i) {
    const double scaled = hard.data()[i] * k;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-12);
  }
}

TEST(Targets, MissingNeighborIsUsageError) {
  KnnMatrix knn = knn_of(3, 1, {1, 2, 0});
  std::vector<std::uint32_t> batch{0};
  std::vector<std::uint32_t> ids{2};
  EXPECT_THROW(neighbor_bin_distribution(batch, knn, ids, rows_of({{0.5, 0.5}})),
               UsageError);
}

TEST(Quality, OneHotMatchIsZero) {
  Matrix logits = rows_of({{0, -1e4, -1e4}});
  QualityCost q = quality_cost(logits, rows_of({{1, 0, 0}}));
  EXPECT_NEAR(q.value, 0.0, 1e-12);
}

TEST(Quality, UniformRowCostsLogM) {
  Matrix logits = Matrix::Zero(2, 4);
  QualityCost q = quality_cost(logits, rows_of({{0.25, 0.25, 0.5, 0}, {0, 0, 0, 1}}));
  EXPECT_NEAR(q.per_point[0], std::log(4.0), 1e-12);
  EXPECT_NEAR(q.per_point[1], 1.3863, 1e-4);
  EXPECT_NEAR(q.value, std::log(4.0), 1e-12);
}

TEST(Quality, ZeroProbabilityTargetStaysFinite) {
  Matrix logits = rows_of({{800, 0}});
  QualityCost q = quality_cost(logits, rows_of({{0, 1}}));
  EXPECT_TRUE(std::isfinite(q.value));
  EXPECT_NEAR(q.value, 800.0, 1e-9);
}

TEST(Quality, ZeroWeightContributesNothing) {
  Matrix logits = random_logits(3, 4, 1);
  Matrix targets = random_targets(3, 4, 5, 2);
  std::vector<double> w{1.0, 0.0, 2.0};
  QualityCost q = quality_cost(logits, targets, w);
  EXPECT_EQ(q.per_point[1], 0.0);
  EXPECT_EQ(q.grad_logits.row(1).cwiseAbs().maxCoeff(), 0.0);
  QualityCost unweighted = quality_cost(logits, targets);
  EXPECT_NEAR(q.per_point[2], 2.0 * unweighted.per_point[2], 1e-12);
}

TEST(Quality, GradientFormula) {
  Matrix logits = random_logits(5, 3, 7);
  Matrix targets = random_targets(5, 3, 4, 8);
  std::vector<double> w{0.5, 1, 2, 0, 3};
  QualityCost q = quality_cost(logits, targets, w);
  Matrix p = softmax_rows(logits);
  for (long i = 0; i < 5; ++i) {
    for (long j = 0; j < 3; ++j) {
      EXPECT_NEAR(q.grad_logits(i, j), w[i] * (p(i, j) - targets(i, j)) / 5.0, 1e-15);
    }
  }
}

TEST(Quality, NonNegativeAndRejectsNegativeWeights) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_GE(quality_cost(random_logits(6, 3, s), random_targets(6, 3, 3, s)).value, 0.0);
  }
  std::vector<double> w{-1.0};
  EXPECT_THROW(quality_cost(Matrix::Zero(1, 2), rows_of({{1, 0}}), w), ParameterError);
}

TEST(Balance, PerfectHardAssignment) {
  BalanceCost s = balance_cost(rows_of({{1, 0}, {1, 0}, {0, 1}, {0, 1}}));
  EXPECT_EQ(s.value, -4.0);
  EXPECT_EQ(s.window, 2u);
}

TEST(Balance, EverythingInOneBin) {
  BalanceCost s = balance_cost(rows_of({{1, 0}, {1, 0}, {1, 0}, {1, 0}}));
  EXPECT_EQ(s.value, -2.0);
}

TEST(Balance, UniformRows) {
  BalanceCost s = balance_cost(Matrix::Constant(4, 2, 0.5));
  EXPECT_EQ(s.value, -2.0);
  // All ties: the lowest rows win.
  EXPECT_EQ(s.window_mask, rows_of({{1, 1}, {1, 1}, {0, 0}, {0, 0}}));
}

TEST(Balance, WindowIsCeiling) {
  BalanceCost s = balance_cost(softmax_rows(random_logits(10, 4, 2)));
  EXPECT_EQ(s.window, 3u);
  EXPECT_EQ(s.window_mask.sum(), 12.0);
  EXPECT_EQ(s.grad_probs, -s.window_mask);
}

TEST(Balance, SelectsColumnMaxima) {
  Matrix p = softmax_rows(random_logits(12, 3, 9));
  BalanceCost s = balance_cost(p);
  for (long j = 0; j < 3; ++j) {
    double chosen_min = 1.0, rest_max = 0.0;
    for (long i = 0; i < 12; ++i) {
      if (s.window_mask(i, j) == 1.0) {
        chosen_min = std::min(chosen_min, p(i, j));
      } else {
        rest_max = std::max(rest_max, p(i, j));
      }
    }
    EXPECT_GE(chosen_min, rest_max);
  }
}

TEST(Balance, Bounds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const long b = 8 + static_cast<long>(seed % 20);
    BalanceCost s = balance_cost(softmax_rows(random_logits(b, 4, seed, 4.0)));
    EXPECT_LE(s.value, 0.0);
    EXPECT_GE(s.value, -static_cast<double>(b));
  }
}

TEST(Balance, TooFewRows) {
  EXPECT_THROW(balance_cost(Matrix::Constant(2, 3, 1.0 / 3)), ParameterError);
}

TEST(Total, Arithmetic) {
  // Uniform logits: quality ln 2 for a one-hot target; balance -2 for b=4.
  Matrix logits = Matrix::Zero(4, 2);
  Matrix targets = rows_of({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  LossBreakdown l = total_loss(logits, targets, {}, 7.0);
  EXPECT_NEAR(l.quality, std::log(2.0), 1e-15);
  EXPECT_EQ(l.balance, -2.0);
  EXPECT_EQ(l.total, l.quality + 7.0 * l.balance);
  LossBreakdown zero = total_loss(logits, targets, {}, 0.0);
  EXPECT_EQ(zero.total, zero.quality);
  EXPECT_THROW(total_loss(logits, targets, {}, -1.0), ParameterError);
}

TEST(Total, LogitGradientMatchesFiniteDifferences) {
  const double eta = 7.0, h = 1e-4;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix z = random_logits(64, 4, seed);
    Matrix t = random_targets(64, 4, 10, seed + 50);
    std::vector<double> w(64);
    std::mt19937_64 rng(seed);
    for (auto& v : w) v = 0.5 + (rng() % 100) / 100.0;
    LossBreakdown base = total_loss(z, t, w, eta);
    double diff = 0.0, ref = 0.0;
    for (long i = 0; i < z.size(); ++i) {
      Matrix up = z, down = z;
      up.data()[i] += h;
      down.data()[i] -= h;
      LossBreakdown lu = total_loss(up, t, w, eta);
      LossBreakdown ld = total_loss(down, t, w, eta);
      if (lu.window_mask != base.window_mask || ld.window_mask != base.window_mask) {
        continue;
      }
      const double fd = (lu.total - ld.total) / (2 * h);
      const double a = base.grad_logits.data()[i];
      diff += (fd - a) * (fd - a);
      ref += std::max(fd * fd, a * a);
      ++checked;
    }
    EXPECT_LE(std::sqrt(diff / ref), 1e-4) << "seed " << seed;
  }
  EXPECT_GT(checked, 2000);
}

TEST(Total, PermutingRowsPermutesPerPointLoss) {
  Matrix z = random_logits(12, 3, 5);
  Matrix t = random_targets(12, 3, 4, 6);
  std::vector<long> perm(12);
  std::iota(perm.begin(), perm.end(), 0L);
  std::mt19937_64 rng(2);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix zp(12, 3), tp(12, 3);
  for (long i = 0; i < 12; ++i) {
    zp.row(i) = z.row(perm[i]);
    tp.row(i) = t.row(perm[i]);
  }
  LossBreakdown a = total_loss(z, t, {}, 3.0);
  LossBreakdown b = total_loss(zp, tp, {}, 3.0);
  EXPECT_NEAR(a.total, b.total, 1e-12);
  for (long i = 0; i < 12; ++i) {
    EXPECT_DOUBLE_EQ(b.per_point_quality[i], a.per_point_quality[perm[i]]);
  }
}

}  // namespace
}  // namespace uspann
