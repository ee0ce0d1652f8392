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
#include "uspann/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uspann/error.h"

namespace uspann {
namespace {

constexpr char kModelMagic[] = "USPMODEL";
constexpr std::uint32_t kModelVersion = 1;
constexpr std::size_t kEvalChunk = 1024;

std::vector<std::pair<std::size_t, std::size_t>> expected_shapes(
    const Architecture& a) {
  if (a.kind == ArchKind::kLogisticRegression) {
    return {{a.bins, a.input_dim}, {1, a.bins}};
  }
  return {{a.hidden_dim, a.input_dim},
          {1, a.hidden_dim},
          {a.bins, a.hidden_dim},
          {1, a.bins}};
}

void check_finite(const Matrix& batch) {
  if (!batch.allFinite()) throw InputError("non-finite value in model input");
}

std::uint64_t dropout_seed_for(std::uint64_t seed) {
  return seed ^ 0x9e3779b97f4a7c15ULL;
}

}  // namespace

std::string_view arch_name(ArchKind kind) {
  return kind == ArchKind::kMlp ? "mlp" : "logreg";
}

ArchKind parse_arch(std::string_view name) {
  if (name == "mlp") return ArchKind::kMlp;
  if (name == "logreg" || name == "logistic") return ArchKind::kLogisticRegression;
  throw ParameterError("unknown architecture: " + std::string(name));
}

void Architecture::validate() const {
  if (input_dim < 1) throw ParameterError("architecture needs input_dim >= 1");
  if (bins < 2) throw ParameterError("architecture needs at least 2 bins");
  if (kind == ArchKind::kMlp) {
    if (hidden_dim < 1) throw ParameterError("mlp needs hidden_dim >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0)) {
      throw ParameterError("dropout rate must lie in [0, 1)");
    }
  } else if (kind != ArchKind::kLogisticRegression) {
    throw ParameterError("unknown architecture kind");
  }
}

Architecture Architecture::logistic(std::size_t d, std::size_t bins) {
  return Architecture{ArchKind::kLogisticRegression, d, 0, bins, 0.0};
}

Architecture Architecture::mlp(std::size_t d, std::size_t bins,
                               std::size_t hidden, double dropout) {
  return Architecture{ArchKind::kMlp, d, hidden, bins, dropout};
}

PartitionerModel PartitionerModel::init(const Architecture& arch,
                                        std::uint64_t seed) {
  arch.validate();
  std::mt19937_64 rng(seed);
  ParameterSet params;
  const auto shapes = expected_shapes(arch);
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto [rows, cols] = shapes[k];
    Matrix t = Matrix::Zero(static_cast<long>(rows), static_cast<long>(cols));
    if (k % 2 == 0) {  // weight matrix: out x in
      const double limit =
          std::sqrt(6.0 / static_cast<double>(rows + cols));
      std::uniform_real_distribution<double> u(-limit, limit);
      for (long i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
    }
    params.push_back(std::move(t));
  }
  PartitionerModel model(arch, std::move(params), dropout_seed_for(seed));
  model.round_to_float32();
  return model;
}

PartitionerModel::PartitionerModel(Architecture arch, ParameterSet params,
                                   std::uint64_t dropout_seed)
    : arch_(arch), params_(std::move(params)), dropout_rng_(dropout_seed) {
  arch_.validate();
  const auto shapes = expected_shapes(arch_);
  if (params_.size() != shapes.size()) {
    throw ParameterError("expected " + std::to_string(shapes.size()) +
                         " parameter tensors, got " +
                         std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (static_cast<std::size_t>(params_[i].rows()) != shapes[i].first ||
        static_cast<std::size_t>(params_[i].cols()) != shapes[i].second) {
      throw ParameterError("parameter tensor " + std::to_string(i) +
                           " has the wrong shape");
    }
  }
}

std::size_t PartitionerModel::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += static_cast<std::size_t>(p.size());
  return total;
}

Matrix PartitionerModel::compute_logits(const Matrix& batch,
                                        const Matrix* mask,
                                        Trace* trace) const {
  if (static_cast<std::size_t>(batch.cols()) != arch_.input_dim) {
    throw ParameterError("batch width " + std::to_string(batch.cols()) +
                         " does not match model input " +
                         std::to_string(arch_.input_dim));
  }
  check_finite(batch);
  if (arch_.kind == ArchKind::kLogisticRegression) {
    Matrix z = batch * params_[0].transpose();
    z.rowwise() += params_[1].row(0);
    if (trace) trace->input = batch;
    return z;
  }
  Matrix pre = batch * params_[0].transpose();
  pre.rowwise() += params_[1].row(0);
  Matrix hidden = pre.cwiseMax(0.0);
  if (mask) hidden = hidden.cwiseProduct(*mask);
  Matrix z = hidden * params_[2].transpose();
  z.rowwise() += params_[3].row(0);
  if (trace) {
    trace->input = batch;
    trace->hidden_pre = std::move(pre);
    trace->hidden = std::move(hidden);
    trace->mask = mask ? *mask : Matrix();
  }
  return z;
}

Matrix PartitionerModel::logits(const Matrix& batch) const {
  return compute_logits(batch, nullptr, nullptr);
}

Matrix PartitionerModel::probabilities(const Matrix& batch) const {
  return softmax_rows(logits(batch));
}

std::vector<double> PartitionerModel::probabilities(
    std::span<const float> point) const {
  Matrix p = probabilities(to_matrix(point));
  return std::vector<double>(p.data(), p.data() + p.size());
}

Matrix PartitionerModel::forward_logits(const Matrix& batch, Mode mode) {
  Trace trace;
  Matrix mask;
  const bool drop = mode == Mode::kTrain && arch_.kind == ArchKind::kMlp &&
                    arch_.dropout > 0.0;
  if (drop) {
    mask.resize(batch.rows(), static_cast<long>(arch_.hidden_dim));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - arch_.dropout);
    for (long i = 0; i < mask.size(); ++i) {
      mask.data()[i] = u(dropout_rng_) >= arch_.dropout ? keep_scale : 0.0;
    }
  }
  Matrix z = compute_logits(batch, drop ? &mask : nullptr, &trace);
  trace_ = std::move(trace);
  return z;
}

Matrix PartitionerModel::forward(const Matrix& batch, Mode mode) {
  return softmax_rows(forward_logits(batch, mode));
}

ParameterSet PartitionerModel::backward(const Matrix& grad_logits) const {
  if (!trace_) {
    throw UsageError("backward() called without a recorded forward pass");
  }
  const Trace& t = *trace_;
  if (grad_logits.rows() != t.input.rows() ||
      static_cast<std::size_t>(grad_logits.cols()) != arch_.bins) {
    throw ParameterError("upstream gradient shape does not match the forward");
  }
  ParameterSet grads;
  if (arch_.kind == ArchKind::kLogisticRegression) {
    grads.push_back(grad_logits.transpose() * t.input);
    grads.push_back(grad_logits.colwise().sum());
    return grads;
  }
  Matrix d_w2 = grad_logits.transpose() * t.hidden;
  Matrix d_c2 = grad_logits.colwise().sum();
  Matrix d_hidden = grad_logits * params_[2];
  if (t.mask.size() > 0) d_hidden = d_hidden.cwiseProduct(t.mask);
  Matrix d_pre = d_hidden.array() * (t.hidden_pre.array() > 0.0).cast<double>();
  grads.push_back(d_pre.transpose() * t.input);
  grads.push_back(d_pre.colwise().sum());
  grads.push_back(std::move(d_w2));
  grads.push_back(std::move(d_c2));
  return grads;
}

void PartitionerModel::round_to_float32() {
  for (auto& p : params_) {
    for (long i = 0; i < p.size(); ++i) {
      p.data()[i] = static_cast<double>(static_cast<float>(p.data()[i]));
    }
  }
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (long i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (long j = 0; j < logits.cols(); ++j) {
      out(i, j) = std::exp(logits(i, j) - mx);
      sum += out(i, j);
    }
    out.row(i) /= sum;
  }
  return out;
}

Matrix softmax_backward(const Matrix& probs, const Matrix& grad_probs) {
  // dz_j = p_j * (g_j - sum_k g_k p_k)
  Eigen::VectorXd dot = probs.cwiseProduct(grad_probs).rowwise().sum();
  Matrix centered = grad_probs.colwise() - dot;
  return probs.cwiseProduct(centered);
}

ParameterSet zeros_like(const ParameterSet& params) {
  ParameterSet out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Matrix::Zero(p.rows(), p.cols()));
  return out;
}

Matrix to_matrix(const Dataset& ds, std::span<const std::uint32_t> indices) {
  const std::size_t rows = indices.empty() ? ds.size() : indices.size();
  Matrix m(static_cast<long>(rows), static_cast<long>(ds.dim()));
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = ds.row(indices.empty() ? i : indices[i]);
    for (std::size_t j = 0; j < r.size(); ++j) {
      m(static_cast<long>(i), static_cast<long>(j)) = r[j];
    }
  }
  return m;
}

Matrix to_matrix(std::span<const float> point) {
  Matrix m(1, static_cast<long>(point.size()));
  for (std::size_t j = 0; j < point.size(); ++j) m(0, static_cast<long>(j)) = point[j];
  return m;
}

std::vector<BinScore> rank_bins(std::span<const double> probs,
                                std::size_t count) {
  if (count < 1 || count > probs.size()) {
    throw ParameterError("m' must satisfy 1 <= m' <= m, got m'=" +
                         std::to_string(count) + " m=" +
                         std::to_string(probs.size()));
  }
  std::vector<std::uint32_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0u);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return probs[a] > probs[b] || (probs[a] == probs[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(count),
                    order.end(), better);
  std::vector<BinScore> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({order[i], probs[order[i]]});
  return out;
}

std::vector<BinScore> predict_bins(const PartitionerModel& model,
                                   std::span<const float> point,
                                   std::size_t m_prime) {
  return rank_bins(model.probabilities(point), m_prime);
}

std::vector<std::int32_t> assign_bins(const PartitionerModel& model,
                                      const Dataset& ds) {
  std::vector<std::int32_t> out(ds.size());
  std::vector<std::uint32_t> idx;
  for (std::size_t begin = 0; begin < ds.size(); begin += kEvalChunk) {
    const std::size_t end = std::min(ds.size(), begin + kEvalChunk);
    idx.resize(end - begin);
    std::iota(idx.begin(), idx.end(), static_cast<std::uint32_t>(begin));
    // Argmax of the logits equals argmax of the softmax, but ties must be
    // judged on the probabilities the query path sees.
    Matrix p = model.probabilities(to_matrix(ds, idx));
    for (long i = 0; i < p.rows(); ++i) {
      long best = 0;
      for (long j = 1; j < p.cols(); ++j) {
        if (p(i, j) > p(i, best)) best = j;
      }
      out[begin + static_cast<std::size_t>(i)] = static_cast<std::int32_t>(best);
    }
  }
  return out;
}

void encode_model(const PartitionerModel& model, ByteWriter& out) {
  const Architecture& a = model.arch();
  out.put_magic({kModelMagic, 8});
  out.put_u32(kModelVersion);
  out.put_u32(static_cast<std::uint32_t>(a.kind));
  out.put_u64(a.input_dim);
  out.put_u64(a.hidden_dim);
  out.put_u64(a.bins);
  out.put_f64(a.dropout);
  out.put_u32(static_cast<std::uint32_t>(model.parameters().size()));
  for (const auto& p : model.parameters()) {
    out.put_u64(static_cast<std::uint64_t>(p.rows()));
    out.put_u64(static_cast<std::uint64_t>(p.cols()));
    for (long i = 0; i < p.size(); ++i) {
      out.put_f32(static_cast<float>(p.data()[i]));
    }
  }
}

PartitionerModel decode_model(ByteReader& in) {
  in.expect_magic({kModelMagic, 8});
  const std::uint32_t version = in.get_u32("model version");
  if (version != kModelVersion) {
    in.fail("unsupported model version " + std::to_string(version));
  }
  Architecture a;
  const std::uint32_t kind = in.get_u32("arch kind");
  if (kind != static_cast<std::uint32_t>(ArchKind::kMlp) &&
      kind != static_cast<std::uint32_t>(ArchKind::kLogisticRegression)) {
    in.fail("unknown arch kind " + std::to_string(kind));
  }
  a.kind = static_cast<ArchKind>(kind);
  a.input_dim = in.get_u64("input_dim");
  a.hidden_dim = in.get_u64("hidden_dim");
  a.bins = in.get_u64("bins");
  a.dropout = in.get_f64("dropout");
  try {
    a.validate();
  } catch (const ParameterError& e) {
    in.fail(std::string("invalid architecture: ") + e.what());
  }
  const auto shapes = expected_shapes(a);
  const std::uint32_t count = in.get_u32("tensor count");
  if (count != shapes.size()) in.fail("tensor count does not match arch");
  ParameterSet params;
  for (std::size_t t = 0; t < count; ++t) {
    const std::uint64_t rows = in.get_u64("tensor rows");
    const std::uint64_t cols = in.get_u64("tensor cols");
    if (rows != shapes[t].first || cols != shapes[t].second) {
      in.fail("tensor " + std::to_string(t) + " shape does not match arch");
    }
    if (in.remaining() < rows * cols * 4) {
      in.fail("truncated tensor " + std::to_string(t));
    }
    Matrix m(static_cast<long>(rows), static_cast<long>(cols));
    for (long i = 0; i < m.size(); ++i) m.data()[i] = in.get_f32("parameter");
    if (!m.allFinite()) in.fail("non-finite parameter in tensor");
    params.push_back(std::move(m));
  }
  return PartitionerModel(a, std::move(params));
}

void save_model(const PartitionerModel& model,
                const std::filesystem::path& path) {
  ByteWriter w;
  encode_model(model, w);
  write_file_bytes(path, w.bytes());
}

PartitionerModel load_model(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader r(bytes);
  PartitionerModel model = decode_model(r);
  if (!r.at_end()) r.fail("trailing bytes after model");
  return model;
}

}  // namespace uspann
