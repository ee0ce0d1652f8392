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
#ifndef USPANN_DISTANCE_H_
#define USPANN_DISTANCE_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace uspann {

enum class Metric { kEuclidean, kSquaredEuclidean };

// float32 inputs, 64-bit accumulation.
inline double squared_l2(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return sum;
}

// Maps a squared L2 distance to the metric's reported value. Neighbor
// ordering is always decided on the squared value, so both metrics yield
// identical rankings even where sqrt would collapse distinct values.
inline double from_squared(Metric metric, double squared) {
  return metric == Metric::kEuclidean ? std::sqrt(squared) : squared;
}

inline double distance(Metric metric, std::span<const float> a,
                       std::span<const float> b) {
  return from_squared(metric, squared_l2(a, b));
}

std::string_view metric_name(Metric metric);
// Accepts "euclidean", "l2", "squared_euclidean", "sqeuclidean".
Metric parse_metric(std::string_view name);

}  // namespace uspann

#endif  // USPANN_DISTANCE_H_
