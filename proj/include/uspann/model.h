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
#ifndef USPANN_MODEL_H_
#define USPANN_MODEL_H_

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "uspann/binary_io.h"
#include "uspann/dataset.h"

namespace uspann {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ArchKind : std::uint32_t { kLogisticRegression = 1, kMlp = 2 };

std::string_view arch_name(ArchKind kind);
ArchKind parse_arch(std::string_view name);  // "logreg" | "mlp"

struct Architecture {
  ArchKind kind = ArchKind::kMlp;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 128;  // mlp only
  std::size_t bins = 2;
  double dropout = 0.1;  // mlp only, applied to the hidden activations

  // Throws ParameterError unless d >= 1, bins >= 2, hidden >= 1 (mlp) and
  // 0 <= dropout < 1.
  void validate() const;

  static Architecture logistic(std::size_t d, std::size_t bins);
  static Architecture mlp(std::size_t d, std::size_t bins,
                          std::size_t hidden = 128, double dropout = 0.1);

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Gradients and Adam moments share the parameter layout: one matrix per
// tensor, biases stored as 1 x width rows.
using ParameterSet = std::vector<Matrix>;

// The trainable partitioner: maps a point to a probability distribution over
// bins. Logistic regression is softmax(W x + c); the mlp is
// softmax(W2 dropout(relu(W1 x + c1)) + c2).
//
// Const members are pure evaluation-mode functions and safe to call
// concurrently. forward() records activations for backward() and mutates the
// dropout generator, so training requires exclusive ownership.
class PartitionerModel {
 public:
  enum class Mode { kEval, kTrain };

  // Glorot-uniform weights, zero biases. Parameters are rounded to float32 so
  // a saved model reloads bit-exactly.
  static PartitionerModel init(const Architecture& arch, std::uint64_t seed);

  // Throws ParameterError if the tensor shapes do not match arch.
  PartitionerModel(Architecture arch, ParameterSet params,
                   std::uint64_t dropout_seed = 0);

  const Architecture& arch() const { return arch_; }
  std::size_t bins() const { return arch_.bins; }
  const ParameterSet& parameters() const { return params_; }
  ParameterSet& mutable_parameters() { return params_; }
  std::size_t parameter_count() const;

  // Evaluation mode.
  Matrix logits(const Matrix& batch) const;
  Matrix probabilities(const Matrix& batch) const;
  std::vector<double> probabilities(std::span<const float> point) const;

  // Records activations (and the dropout mask in training mode).
  Matrix forward_logits(const Matrix& batch, Mode mode);
  Matrix forward(const Matrix& batch, Mode mode);

  // Parameter gradients of a loss whose gradient with respect to the logits
  // of the last recorded forward() is grad_logits. Throws UsageError when no
  // forward pass has been recorded.
  ParameterSet backward(const Matrix& grad_logits) const;
  bool has_recorded_forward() const { return trace_.has_value(); }
  void clear_recorded_forward() { trace_.reset(); }

  void round_to_float32();

 private:
  struct Trace {
    Matrix input;
    Matrix hidden_pre;  // mlp: W1 x + c1
    Matrix mask;        // mlp: dropout scale per hidden unit, empty in eval
    Matrix hidden;      // mlp: dropped relu output
  };

  Matrix compute_logits(const Matrix& batch, const Matrix* mask,
                        Trace* trace) const;

  Architecture arch_;
  ParameterSet params_;
  std::mt19937_64 dropout_rng_;
  std::optional<Trace> trace_;
};

// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

// Pulls a gradient with respect to softmax outputs back to the logits.
Matrix softmax_backward(const Matrix& probs, const Matrix& grad_probs);

ParameterSet zeros_like(const ParameterSet& params);

// Rows of ds selected by indices (all rows when indices is empty).
Matrix to_matrix(const Dataset& ds, std::span<const std::uint32_t> indices = {});
Matrix to_matrix(std::span<const float> point);

struct BinScore {
  std::uint32_t bin;
  double probability;
  friend bool operator==(const BinScore&, const BinScore&) = default;
};

// Top-count bins of one probability row, descending probability, ties to the
// lower bin id. Throws ParameterError unless 1 <= count <= probs.size().
std::vector<BinScore> rank_bins(std::span<const double> probs,
                                std::size_t count);

std::vector<BinScore> predict_bins(const PartitionerModel& model,
                                   std::span<const float> point,
                                   std::size_t m_prime);

// Argmax bin (ties to the lower id) of every row, evaluation mode.
std::vector<std::int32_t> assign_bins(const PartitionerModel& model,
                                      const Dataset& ds);

// "USPMODEL" magic, u32 version, u32 arch kind, u64 input_dim, u64 hidden,
// u64 bins, f64 dropout, u32 tensor count, then per tensor u64 rows, u64
// cols and rows*cols float32 row-major, little-endian throughout.
void encode_model(const PartitionerModel& model, ByteWriter& out);
PartitionerModel decode_model(ByteReader& in);
void save_model(const PartitionerModel& model,
                const std::filesystem::path& path);
PartitionerModel load_model(const std::filesystem::path& path);

}  // namespace uspann

#endif  // USPANN_MODEL_H_
