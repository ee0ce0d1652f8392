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
#ifndef USPANN_KNN_H_
#define USPANN_KNN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "uspann/dataset.h"
#include "uspann/distance.h"

namespace uspann {

// Row i holds the ids of the k nearest dataset points of point i (self
// excluded), ascending by distance, ties to the lower id.
struct KnnMatrix {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t source_checksum = 0;
  std::vector<std::int32_t> neighbors;  // n * k, row-major

  std::span<const std::int32_t> row(std::size_t i) const {
    return {neighbors.data() + i * k, k};
  }

  friend bool operator==(const KnnMatrix&, const KnnMatrix&) = default;
};

// Exact k-NN of every query among the train points, with distances reported
// in the requested metric.
struct GroundTruth {
  std::size_t queries = 0;
  std::size_t k = 0;
  std::uint64_t train_checksum = 0;
  std::vector<std::int32_t> neighbors;  // queries * k
  std::vector<double> distances;        // queries * k

  std::span<const std::int32_t> row(std::size_t i) const {
    return {neighbors.data() + i * k, k};
  }
};

// Brute force over all pairs; rows are computed in parallel and do not
// depend on the thread count. Requires 1 <= k < n.
KnnMatrix build_knn_matrix(const Dataset& ds, std::size_t k,
                           Metric metric = Metric::kEuclidean);

// Requires 1 <= k <= train.size() and matching dimensionality.
GroundTruth ground_truth(const Dataset& train, const Dataset& queries,
                         std::size_t k, Metric metric = Metric::kEuclidean);

// Cache layout: "USPKNN01" magic, u32 version, u64 n, u64 k, u64 dataset
// checksum, then n*k int32, little-endian.
void save_knn_cache(const KnnMatrix& m, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_knn_cache(const KnnMatrix& m);

// Throws StaleCacheError when the stored checksum differs from
// expected_checksum and FormatError on malformed or truncated input.
KnnMatrix load_knn_cache(const std::filesystem::path& path,
                         std::uint64_t expected_checksum);
KnnMatrix decode_knn_cache(std::span<const std::uint8_t> bytes,
                           std::uint64_t expected_checksum);

}  // namespace uspann

#endif  // USPANN_KNN_H_
