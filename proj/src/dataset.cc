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
#include "uspann/dataset.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "uspann/binary_io.h"
#include "uspann/error.h"

namespace uspann {

Dataset::Dataset(std::vector<float> points, std::size_t n, std::size_t d,
                 std::optional<std::vector<std::int32_t>> labels)
    : points_(std::move(points)), n_(n), d_(d), labels_(std::move(labels)) {
  if (n_ == 0 || d_ == 0) {
    throw ParameterError("dataset needs n >= 1 and d >= 1, got n=" +
                         std::to_string(n_) + " d=" + std::to_string(d_));
  }
  if (points_.size() != n_ * d_) {
    throw ParameterError("dataset buffer holds " +
                         std::to_string(points_.size()) + " values, expected " +
                         std::to_string(n_ * d_));
  }
  if (labels_ && labels_->size() != n_) {
    throw ParameterError("label count does not match point count");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw InputError("non-finite value in dataset at point " +
                       std::to_string(i / d_) + ", dim " +
                       std::to_string(i % d_));
    }
  }
}

const std::vector<std::int32_t>& Dataset::labels() const {
  if (!labels_) throw ParameterError("dataset has no labels");
  return *labels_;
}

Dataset Dataset::subset(std::span<const std::uint32_t> indices) const {
  std::vector<float> pts;
  pts.reserve(indices.size() * d_);
  std::optional<std::vector<std::int32_t>> lab;
  if (labels_) lab.emplace();
  for (std::uint32_t i : indices) {
    if (i >= n_) throw ParameterError("subset index out of range");
    auto r = row(i);
    pts.insert(pts.end(), r.begin(), r.end());
    if (lab) lab->push_back((*labels_)[i]);
  }
  return Dataset(std::move(pts), indices.size(), d_, std::move(lab));
}

std::uint64_t Dataset::checksum() const {
  ByteWriter header;
  header.put_u64(n_);
  header.put_u64(d_);
  std::uint64_t h = fnv1a64(header.bytes());
  return fnv1a64({reinterpret_cast<const std::uint8_t*>(points_.data()),
                  points_.size() * sizeof(float)},
                 h);
}

Split split(const Dataset& ds, double query_fraction, std::uint64_t seed) {
  if (!(query_fraction > 0.0 && query_fraction < 1.0)) {
    throw ParameterError("query fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto q = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * query_fraction));
  if (q == 0 || q >= n) {
    throw ParameterError("query fraction " + std::to_string(query_fraction) +
                         " leaves an empty side for n=" + std::to_string(n));
  }
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::uint32_t> query_idx(perm.begin(), perm.begin() + q);
  std::vector<std::uint32_t> train_idx(perm.begin() + q, perm.end());
  std::sort(query_idx.begin(), query_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  Dataset train = ds.subset(train_idx);
  Dataset queries = ds.subset(query_idx);
  return Split{std::move(train), std::move(queries), std::move(train_idx),
               std::move(query_idx)};
}

Dataset Standardizer::apply(const Dataset& ds) const {
  if (ds.dim() != mean.size()) {
    throw ParameterError("standardizer fitted on d=" +
                         std::to_string(mean.size()) + " applied to d=" +
                         std::to_string(ds.dim()));
  }
  std::vector<float> out(ds.data().size());
  const std::size_t d = ds.dim();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto r = ds.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      out[i * d + j] = static_cast<float>((r[j] - mean[j]) / scale[j]);
    }
  }
  std::optional<std::vector<std::int32_t>> labels;
  if (ds.has_labels()) labels = ds.labels();
  return Dataset(std::move(out), ds.size(), d, std::move(labels));
}

Standardized standardize(const Dataset& train) {
  if (train.size() < 2) {
    throw ParameterError("standardize needs at least two points");
  }
  const std::size_t n = train.size();
  const std::size_t d = train.dim();
  Standardizer t{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  for (std::size_t i = 0; i < n; ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) t.mean[j] += r[j];
  }
  for (double& m : t.mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r[j] - t.mean[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    t.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  Dataset data = t.apply(train);
  return Standardized{std::move(data), std::move(t)};
}

}  // namespace uspann
