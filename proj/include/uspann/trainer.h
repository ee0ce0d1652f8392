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
#ifndef USPANN_TRAINER_H_
#define USPANN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "uspann/dataset.h"
#include "uspann/error.h"
#include "uspann/knn.h"
#include "uspann/loss.h"
#include "uspann/model.h"

namespace uspann {

struct TrainConfig {
  double eta = 7.0;
  std::size_t epochs = 100;
  double batch_fraction = 0.04;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t k_prime = 10;
  std::uint64_t seed = 0;
  // One nonnegative weight per dataset point scaling its quality term
  // (ensemble training). Rescaled to mean 1 before use.
  std::optional<std::vector<double>> point_weights;
  TargetMode target_mode = TargetMode::kArgmax;

  void validate() const;
  // Single-line JSON rendering, used for log headers and CLI echoes.
  std::string to_json() const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double quality = 0.0;   // means over the epoch's batches
  double balance = 0.0;
  double total = 0.0;
  std::size_t max_bin = 0;  // full-dataset histogram after the epoch
  std::size_t min_bin = 0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::vector<std::size_t> histogram;  // final, sums to n
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::size_t batch_size = 0;
  std::size_t batches_per_epoch = 0;
};

struct TrainResult {
  PartitionerModel model;
  TrainReport report;
};

// Thrown when the loss or a gradient turns non-finite. Carries the model as
// it was before the failing step.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, PartitionerModel last_good)
      : Error(what), last_good_(std::move(last_good)) {}
  const PartitionerModel& last_good() const { return last_good_; }

 private:
  PartitionerModel last_good_;
};

// max(bins, round(n * fraction)), which must not exceed n.
std::size_t batch_size_for(std::size_t n, double fraction, std::size_t bins);

// batch_size distinct indices drawn uniformly from [0, n).
std::vector<std::uint32_t> sample_batch(std::size_t n, std::size_t batch_size,
                                        std::mt19937_64& rng);

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ParameterSet first_moment;
  ParameterSet second_moment;
  std::uint64_t step = 0;
};

// One bias-corrected Adam update; increments state.step first. Throws
// InputError, leaving params and state untouched, on a non-finite gradient.
void adam_step(ParameterSet& params, const ParameterSet& grads,
               AdamState& state, const AdamOptions& options);

// Mini-batch training. Each epoch runs ceil(1 / batch_fraction) batches;
// every batch forwards its points (training mode) and all their k'
// neighbors (evaluation mode, to build frozen targets), evaluates the total
// loss, back-propagates and takes an Adam step. Deterministic given the seed.
// The returned model's parameters are rounded to float32.
TrainResult train(const Dataset& ds, const KnnMatrix& knn,
                  const Architecture& arch, const TrainConfig& cfg);

// CSV log: "# config: {...}" header comment, then
// epoch,quality,balance,total,max_bin,min_bin.
void write_training_log(std::ostream& out, const TrainReport& report,
                        const TrainConfig& cfg, const Architecture& arch);

std::vector<std::size_t> bin_histogram(std::span<const std::int32_t> assignment,
                                       std::size_t bins);

}  // namespace uspann

#endif  // USPANN_TRAINER_H_
