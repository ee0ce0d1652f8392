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
#include "uspann/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include "json.hpp"
#include <numeric>

namespace uspann {
namespace {

bool all_finite(const ParameterSet& set) {
  return std::all_of(set.begin(), set.end(),
                     [](const Matrix& m) { return m.allFinite(); });
}

std::vector<double> normalized_weights(const TrainConfig& cfg, std::size_t n) {
  if (!cfg.point_weights) return {};
  const auto& w = *cfg.point_weights;
  if (w.size() != n) {
    throw ParameterError("point_weights has " + std::to_string(w.size()) +
                         " entries for " + std::to_string(n) + " points");
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(w);
  const double scale = static_cast<double>(n) / sum;
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(eta >= 0.0)) throw ParameterError("eta must be >= 0");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
    throw ParameterError("batch_fraction must lie in (0, 1]");
  }
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw ParameterError("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ParameterError("adam epsilon must be > 0");
  if (k_prime < 1) throw ParameterError("k' must be >= 1");
  if (point_weights) {
    bool positive = false;
    for (double w : *point_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ParameterError("point weights must be finite and >= 0");
      }
      positive = positive || w > 0.0;
    }
    if (!positive) throw ParameterError("point weights are all zero");
  }
}

std::string TrainConfig::to_json() const {
  nlohmann::json j = {
      {"eta", eta},
      {"epochs", epochs},
      {"batch_fraction", batch_fraction},
      {"learning_rate", learning_rate},
      {"beta1", beta1},
      {"beta2", beta2},
      {"epsilon", epsilon},
      {"k_prime", k_prime},
      {"seed", seed},
      {"weighted", point_weights.has_value()},
      {"targets", target_mode == TargetMode::kArgmax ? "argmax" : "soft"},
  };
  return j.dump();
}

std::size_t batch_size_for(std::size_t n, double fraction, std::size_t bins) {
  const auto raw = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fraction));
  const std::size_t b = std::max(bins, raw);
  if (b > n) {
    throw ParameterError("batch size " + std::to_string(b) +
                         " exceeds dataset size " + std::to_string(n) +
                         " (need n >= bins)");
  }
  return b;
}

std::vector<std::uint32_t> sample_batch(std::size_t n, std::size_t batch_size,
                                        std::mt19937_64& rng) {
  if (batch_size > n) throw ParameterError("batch larger than dataset");
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(batch_size);
  return pool;
}

void adam_step(ParameterSet& params, const ParameterSet& grads,
               AdamState& state, const AdamOptions& options) {
  if (grads.size() != params.size()) {
    throw ParameterError("gradient and parameter sets differ in size");
  }
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (grads[t].rows() != params[t].rows() ||
        grads[t].cols() != params[t].cols()) {
      throw ParameterError("gradient tensor shape mismatch");
    }
  }
  if (!all_finite(grads)) {
    throw InputError("non-finite gradient at adam step " +
                     std::to_string(state.step + 1));
  }
  if (state.first_moment.empty()) {
    state.first_moment = zeros_like(params);
    state.second_moment = zeros_like(params);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& m = state.first_moment[k];
    Matrix& v = state.second_moment[k];
    m = options.beta1 * m + (1.0 - options.beta1) * grads[k];
    v = options.beta2 * v +
        (1.0 - options.beta2) * grads[k].cwiseProduct(grads[k]);
    params[k].array() -=
        options.learning_rate * (m.array() / correction1) /
        ((v.array() / correction2).sqrt() + options.epsilon);
  }
}

std::vector<std::size_t> bin_histogram(std::span<const std::int32_t> assignment,
                                       std::size_t bins) {
  std::vector<std::size_t> h(bins, 0);
  for (std::int32_t b : assignment) ++h[static_cast<std::size_t>(b)];
  return h;
}

TrainResult train(const Dataset& ds, const KnnMatrix& knn,
                  const Architecture& arch, const TrainConfig& cfg) {
  cfg.validate();
  arch.validate();
  const std::size_t n = ds.size();
  if (arch.input_dim != ds.dim()) {
    throw ParameterError("architecture input_dim does not match dataset");
  }
  if (knn.n != n || knn.k != cfg.k_prime) {
    throw ParameterError("k'-NN matrix shape (n=" + std::to_string(knn.n) +
                         ", k'=" + std::to_string(knn.k) +
                         ") does not match dataset/config");
  }
  if (knn.source_checksum != ds.checksum()) {
    throw ParameterError("k'-NN matrix was built from a different dataset");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> weights = normalized_weights(cfg, n);
  const std::size_t b = batch_size_for(n, cfg.batch_fraction, arch.bins);
  const auto batches = static_cast<std::size_t>(
      std::ceil(1.0 / cfg.batch_fraction - 1e-9));

  PartitionerModel model = PartitionerModel::init(arch, cfg.seed);
  std::mt19937_64 rng(cfg.seed);
  AdamState adam;
  const AdamOptions adam_opts{cfg.learning_rate, cfg.beta1, cfg.beta2,
                              cfg.epsilon};

  TrainReport report;
  report.seed = cfg.seed;
  report.batch_size = b;
  report.batches_per_epoch = batches;

  std::vector<double> batch_weights;
  std::vector<std::uint32_t> neighbor_ids;
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochStats stats;
    stats.epoch = epoch;
    for (std::size_t step = 0; step < batches; ++step) {
      const auto batch = sample_batch(n, b, rng);

      neighbor_ids.clear();
      for (std::uint32_t i : batch) {
        for (std::int32_t nb : knn.row(i)) {
          const auto id = static_cast<std::uint32_t>(nb);
          if (!seen[id]) {
            seen[id] = 1;
            neighbor_ids.push_back(id);
          }
        }
      }
      for (std::uint32_t id : neighbor_ids) seen[id] = 0;
      std::sort(neighbor_ids.begin(), neighbor_ids.end());
      const Matrix neighbor_probs =
          model.probabilities(to_matrix(ds, neighbor_ids));
      const Matrix targets = neighbor_bin_distribution(
          batch, knn, neighbor_ids, neighbor_probs, cfg.target_mode);

      batch_weights.clear();
      for (std::uint32_t i : batch) {
        if (!weights.empty()) batch_weights.push_back(weights[i]);
      }
      const Matrix logits = model.forward_logits(
          to_matrix(ds, batch), PartitionerModel::Mode::kTrain);
      const LossBreakdown loss =
          total_loss(logits, targets, batch_weights, cfg.eta);
      ParameterSet grads = model.backward(loss.grad_logits);
      if (!std::isfinite(loss.total) || !all_finite(grads)) {
        PartitionerModel last_good = model;
        last_good.clear_recorded_forward();
        throw TrainingDiverged("training diverged at epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(step + 1),
                               std::move(last_good));
      }
      adam_step(model.mutable_parameters(), grads, adam, adam_opts);
      stats.quality += loss.quality;
      stats.balance += loss.balance;
      stats.total += loss.total;
    }
    stats.quality /= static_cast<double>(batches);
    stats.balance /= static_cast<double>(batches);
    stats.total /= static_cast<double>(batches);
    const auto hist = bin_histogram(assign_bins(model, ds), arch.bins);
    stats.max_bin = *std::max_element(hist.begin(), hist.end());
    stats.min_bin = *std::min_element(hist.begin(), hist.end());
    report.epochs.push_back(stats);
  }

  model.clear_recorded_forward();
  model.round_to_float32();
  report.histogram = bin_histogram(assign_bins(model, ds), arch.bins);
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return TrainResult{std::move(model), std::move(report)};
}

void write_training_log(std::ostream& out, const TrainReport& report,
                        const TrainConfig& cfg, const Architecture& arch) {
  nlohmann::json header = nlohmann::json::parse(cfg.to_json());
  header["arch"] = std::string(arch_name(arch.kind));
  header["input_dim"] = arch.input_dim;
  header["hidden_dim"] = arch.hidden_dim;
  header["bins"] = arch.bins;
  header["dropout"] = arch.dropout;
  header["batch_size"] = report.batch_size;
  header["batches_per_epoch"] = report.batches_per_epoch;
  out << "# config: " << header.dump() << '\n';
  out << "epoch,quality,balance,total,max_bin,min_bin\n";
  for (const auto& e : report.epochs) {
    out << e.epoch << ',' << e.quality << ',' << e.balance << ',' << e.total
        << ',' << e.max_bin << ',' << e.min_bin << '\n';
  }
}

}  // namespace uspann
