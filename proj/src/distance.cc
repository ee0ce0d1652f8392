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
#include "uspann/distance.h"

#include "uspann/error.h"

namespace uspann {

std::string_view metric_name(Metric metric) {
  return metric == Metric::kEuclidean ? "euclidean" : "squared_euclidean";
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean" || name == "l2") return Metric::kEuclidean;
  if (name == "squared_euclidean" || name == "sqeuclidean") {
    return Metric::kSquaredEuclidean;
  }
  throw ParameterError("unknown metric: " + std::string(name));
}

}  // namespace uspann
