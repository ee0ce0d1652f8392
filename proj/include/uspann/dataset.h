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
#ifndef USPANN_DATASET_H_
#define USPANN_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uspann {

// Immutable n x d row-major matrix of float32 points, optionally carrying
// integer ground-truth labels (synthetic data only).
class Dataset {
 public:
  // Throws ParameterError on shape mismatch or n, d == 0, and InputError on
  // non-finite entries.
  Dataset(std::vector<float> points, std::size_t n, std::size_t d,
          std::optional<std::vector<std::int32_t>> labels = std::nullopt);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }

  std::span<const float> row(std::size_t i) const {
    return {points_.data() + i * d_, d_};
  }
  const std::vector<float>& data() const { return points_; }

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<std::int32_t>& labels() const;

  // Rows selected by indices, in the given order. Labels follow.
  Dataset subset(std::span<const std::uint32_t> indices) const;

  // 64-bit digest over shape and point bytes; labels are not included.
  std::uint64_t checksum() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<float> points_;
  std::size_t n_;
  std::size_t d_;
  std::optional<std::vector<std::int32_t>> labels_;
};

struct Split {
  Dataset train;
  Dataset queries;
  std::vector<std::uint32_t> train_indices;  // ascending
  std::vector<std::uint32_t> query_indices;  // ascending
};

// Uniform random split. The query side holds round(n * query_fraction)
// points; a split leaving either side empty is a ParameterError.
Split split(const Dataset& ds, double query_fraction, std::uint64_t seed);

// Per-dimension affine transform fitted on a training set.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 for zero-variance dimensions

  Dataset apply(const Dataset& ds) const;
};

struct Standardized {
  Dataset data;
  Standardizer transform;
};

// Centers every dimension and divides by its population standard deviation.
// Constant dimensions are only centered.
Standardized standardize(const Dataset& train);

}  // namespace uspann

#endif  // USPANN_DATASET_H_
