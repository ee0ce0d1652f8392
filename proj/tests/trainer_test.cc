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
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "uspann/dataset.h"
#include "uspann/error.h"
#include "uspann/knn.h"
#include "uspann/synthetic.h"
#include "uspann/trainer.h"

namespace uspann {
namespace {

using testing::random_dataset;

TEST(BatchSize, RoundsAndClamps) {
  EXPECT_EQ(batch_size_for(2000, 0.04, 16), 80u);
  EXPECT_EQ(batch_size_for(100, 0.04, 16), 16u);
  EXPECT_EQ(batch_size_for(1000, 0.0125, 2), 13u);  // round(12.5) away from 0
  EXPECT_THROW(batch_size_for(10, 0.5, 11), ParameterError);
}

TEST(SampleBatch, FullFractionIsPermutation) {
  std::mt19937_64 rng(1);
  auto b = sample_batch(50, 50, rng);
  std::sort(b.begin(), b.end());
  std::vector<std::uint32_t> all(50);
  std::iota(all.begin(), all.end(), 0u);
  EXPECT_EQ(b, all);
}

TEST(SampleBatch, DistinctAndInRange) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    auto b = sample_batch(300, 40, rng);
    std::set<std::uint32_t> s(b.begin(), b.end());
    EXPECT_EQ(s.size(), 40u);
    EXPECT_LT(*s.rbegin(), 300u);
  }
}

TEST(SampleBatch, DeterministicGivenState) {
  std::mt19937_64 a(7), b(7);
  EXPECT_EQ(sample_batch(100, 10, a), sample_batch(100, 10, b));
}

TEST(SampleBatch, InclusionFrequencyIsUniform) {
  const std::size_t n = 1000, draws = 10000;
  const std::size_t b = batch_size_for(n, 0.04, 2);
  std::mt19937_64 rng(11);
  std::vector<std::size_t> hits(n, 0);
  for (std::size_t r = 0; r < draws; ++r) {
    for (auto i : sample_batch(n, b, rng)) ++hits[i];
  }
  const double p = 0.04;
  const double sigma = std::sqrt(p * (1 - p) / draws);
  // 1000 indices at 3 sigma: about 2.7 exceedances are expected even for a
  // perfectly uniform sampler, so bound their count and the worst deviation.
  int beyond = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(static_cast<double>(hits[i]) / draws - p);
    if (dev > 3.0 * sigma) ++beyond;
    EXPECT_LE(dev, 4.5 * sigma) << "index " << i;
  }
  EXPECT_LE(beyond, 10);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ParameterSet p{Matrix::Constant(1, 1, 0.5)};
  ParameterSet g{Matrix::Constant(1, 1, 1.0)};
  AdamState s;
  adam_step(p, g, s, AdamOptions{});
  EXPECT_NEAR(p[0](0, 0), 0.5 - 1e-3, 1e-10);
  EXPECT_EQ(s.step, 1u);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  ParameterSet p{Matrix::Constant(2, 3, 0.25)};
  ParameterSet g{Matrix::Zero(2, 3)};
  AdamState s;
  for (int i = 0; i < 5; ++i) adam_step(p, g, s, AdamOptions{});
  EXPECT_EQ(p[0], Matrix::Constant(2, 3, 0.25));
}

TEST(Adam, FirstUpdateOpposesGradientSign) {
  Matrix g0(1, 4);
  g0 << 2.0, -0.1, 1e-3, -50;
  ParameterSet p{Matrix::Zero(1, 4)};
  AdamState s;
  adam_step(p, {g0}, s, AdamOptions{});
  for (long j = 0; j < 4; ++j) {
    EXPECT_EQ(std::signbit(p[0](0, j)), !std::signbit(g0(0, j)));
  }
}

TEST(Adam, NonFiniteGradientLeavesStateUntouched) {
  ParameterSet p{Matrix::Constant(1, 2, 1.0)};
  AdamState s;
  adam_step(p, {Matrix::Constant(1, 2, 0.5)}, s, AdamOptions{});
  const ParameterSet before = p;
  const AdamState state_before = s;
  Matrix bad(1, 2);
  bad << 1.0, NAN;
  EXPECT_THROW(adam_step(p, {bad}, s, AdamOptions{}), InputError);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step, state_before.step);
  EXPECT_EQ(s.first_moment, state_before.first_moment);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.eta = -1;
  EXPECT_THROW(c.validate(), ParameterError);
  c = TrainConfig{};
  c.batch_fraction = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = TrainConfig{};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = TrainConfig{};
  c.point_weights = std::vector<double>{0.0, 0.0};
  EXPECT_THROW(c.validate(), ParameterError);
  c.point_weights = std::vector<double>{0.0, -1.0};
  EXPECT_THROW(c.validate(), ParameterError);
}

class SmallTraining : public ::testing::Test {
 protected:
  SmallTraining()
      : ds_(standardize(generate_blobs(300, 4, 3, 6.0, 1.0, 2)).data),
        knn_(build_knn_matrix(ds_, 5)) {
    cfg_.k_prime = 5;
    cfg_.epochs = 4;
    cfg_.batch_fraction = 0.1;
    cfg_.seed = 3;
  }
  Dataset ds_;
  KnnMatrix knn_;
  TrainConfig cfg_;
  Architecture arch_ = Architecture::mlp(4, 4, 16);
};

TEST_F(SmallTraining, ZeroEpochsReturnsInitialModel) {
  cfg_.epochs = 0;
  TrainResult r = train(ds_, knn_, arch_, cfg_);
  EXPECT_EQ(r.model.parameters(), PartitionerModel::init(arch_, cfg_.seed).parameters());
  EXPECT_TRUE(r.report.epochs.empty());
  EXPECT_EQ(std::accumulate(r.report.histogram.begin(), r.report.histogram.end(),
                            std::size_t{0}),
            ds_.size());
}

TEST_F(SmallTraining, Deterministic) {
  TrainResult a = train(ds_, knn_, arch_, cfg_);
  TrainResult b = train(ds_, knn_, arch_, cfg_);
  EXPECT_EQ(a.model.parameters(), b.model.parameters());
  EXPECT_EQ(a.report.histogram, b.report.histogram);
  cfg_.seed = 4;
  TrainResult c = train(ds_, knn_, arch_, cfg_);
  EXPECT_NE(a.model.parameters(), c.model.parameters());
}

TEST_F(SmallTraining, ReportIsConsistent) {
  TrainResult r = train(ds_, knn_, arch_, cfg_);
  ASSERT_EQ(r.report.epochs.size(), 4u);
  EXPECT_EQ(r.report.batch_size, 30u);
  EXPECT_EQ(r.report.batches_per_epoch, 10u);
  EXPECT_EQ(r.report.seed, 3u);
  EXPECT_EQ(r.report.histogram, bin_histogram(assign_bins(r.model, ds_), 4));
  for (const auto& e : r.report.epochs) {
    EXPECT_GE(e.quality, 0.0);
    EXPECT_LE(e.balance, 0.0);
    EXPECT_GE(e.balance, -30.0);
    EXPECT_NEAR(e.total, e.quality + cfg_.eta * e.balance, 1e-9);
    EXPECT_LE(e.min_bin, e.max_bin);
  }
  EXPECT_EQ(r.report.epochs.back().max_bin,
            *std::max_element(r.report.histogram.begin(), r.report.histogram.end()));
}

TEST_F(SmallTraining, ParametersAreFloat32Representable) {
  TrainResult r = train(ds_, knn_, arch_, cfg_);
  for (const auto& p : r.model.parameters()) {
    for (long i = 0; i < p.size(); ++i) {
      EXPECT_EQ(p.data()[i], static_cast<double>(static_cast<float>(p.data()[i])));
    }
  }
}

TEST_F(SmallTraining, RejectsMismatchedKnn) {
  KnnMatrix other = build_knn_matrix(ds_, 6);
  EXPECT_THROW(train(ds_, other, arch_, cfg_), ParameterError);
  Dataset shifted = random_dataset(300, 4, 1);
  EXPECT_THROW(train(shifted, knn_, arch_, cfg_), ParameterError);
  EXPECT_THROW(train(ds_, knn_, Architecture::mlp(3, 4, 16), cfg_), ParameterError);
}

TEST_F(SmallTraining, WeightScaleDoesNotMatter) {
  // Weights are rescaled to mean 1, so a constant factor is invisible.
  std::vector<double> w(ds_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + static_cast<double>(i % 3);
  cfg_.point_weights = w;
  TrainResult a = train(ds_, knn_, arch_, cfg_);
  for (auto& v : w) v *= 5.0;
  cfg_.point_weights = w;
  TrainResult b = train(ds_, knn_, arch_, cfg_);
  EXPECT_EQ(a.model.parameters(), b.model.parameters());
}

TEST_F(SmallTraining, DivergenceKeepsLastGoodModel) {
  cfg_.learning_rate = 1e300;
  cfg_.epochs = 3;
  try {
    train(ds_, knn_, arch_, cfg_);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    for (const auto& p : e.last_good().parameters()) EXPECT_TRUE(p.allFinite());
  }
}

TEST_F(SmallTraining, LogFormat) {
  TrainResult r = train(ds_, knn_, arch_, cfg_);
  std::ostringstream out;
  write_training_log(out, r.report, cfg_, arch_);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# config: {", 0), 0u);
  EXPECT_NE(line.find("\"eta\":7"), std::string::npos);
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,quality,balance,total,max_bin,min_bin");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Training, LossDecreasesOnBlobs) {
  Split s = split(generate_blobs(2200, 16, 4, 10.0, 1.0, 1), 200.0 / 2200.0, 1);
  Dataset ds = standardize(s.train).data;
  KnnMatrix knn = build_knn_matrix(ds, 10);
  TrainConfig cfg;
  cfg.seed = 1;
  TrainResult r = train(ds, knn, Architecture::mlp(16, 4), cfg);
  ASSERT_EQ(r.report.epochs.size(), 100u);
  EXPECT_LT(r.report.epochs.back().total, r.report.epochs.front().total);
}

}  // namespace
}  // namespace uspann
