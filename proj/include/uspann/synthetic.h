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
#ifndef USPANN_SYNTHETIC_H_
#define USPANN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "uspann/dataset.h"

namespace uspann {

// Isotropic Gaussian clusters. Cluster j owns a contiguous run of points
// (floor(n/c) or ceil(n/c) of them, larger runs first) labelled j. Centers
// are drawn uniformly from a box and rejected until every pair is at least
// 'separation' apart.
Dataset generate_blobs(std::size_t n, std::size_t d, std::size_t clusters,
                       double separation, double sigma, std::uint64_t seed);

// Two interleaving half circles, scikit-learn layout without shuffling:
// first n/2 points on (cos t, sin t), the rest on (1 - cos t, 0.5 - sin t),
// t evenly spaced over [0, pi]. Labels are the arc ids.
Dataset generate_moons(std::size_t n, double noise, std::uint64_t seed);

// Two concentric circles: first n/2 points on the unit circle, the rest on
// a circle of radius factor. Angles are evenly spaced from 0, labels are
// ring ids.
Dataset generate_circles(std::size_t n, double factor, double noise,
                         std::uint64_t seed);

}  // namespace uspann

#endif  // USPANN_SYNTHETIC_H_
