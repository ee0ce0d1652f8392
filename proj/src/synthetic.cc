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
#include "uspann/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "uspann/error.h"

namespace uspann {
namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count,
                             bool endpoint) {
  std::vector<double> out(count);
  if (count == 0) return out;
  const double denom = endpoint ? static_cast<double>(count - 1)
                                : static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = denom == 0.0 ? lo : lo + (hi - lo) * static_cast<double>(i) / denom;
  }
  return out;
}

void add_noise(std::vector<float>& pts, double noise, std::mt19937_64& rng) {
  if (noise <= 0.0) return;
  std::normal_distribution<double> gauss(0.0, noise);
  for (float& v : pts) v = static_cast<float>(v + gauss(rng));
}

}  // namespace

Dataset generate_blobs(std::size_t n, std::size_t d, std::size_t clusters,
                       double separation, double sigma, std::uint64_t seed) {
  if (clusters < 1 || n < clusters || d < 1) {
    throw ParameterError("generate_blobs needs n >= c >= 1 and d >= 1");
  }
  if (sigma < 0.0 || separation < 0.0) {
    throw ParameterError("generate_blobs needs sigma >= 0, separation >= 0");
  }
  std::mt19937_64 rng(seed);

  // Box half-width grows with c^(1/d) so the rejection loop stays short.
  double half = std::max(separation, 1.0) *
                std::max(1.0, std::pow(static_cast<double>(clusters),
                                       1.0 / static_cast<double>(d)));
  std::vector<std::vector<double>> centers;
  int failures = 0;
  while (centers.size() < clusters) {
    std::uniform_real_distribution<double> coord(-half, half);
    std::vector<double> c(d);
    for (double& v : c) v = coord(rng);
    bool ok = true;
    for (const auto& other : centers) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (c[j] - other[j]) * (c[j] - other[j]);
      if (std::sqrt(s) < separation) {
        ok = false;
        break;
      }
    }
    if (ok) {
      centers.push_back(std::move(c));
    } else if (++failures % 100 == 0) {
      half *= 1.5;
    }
  }

  std::vector<float> pts;
  pts.reserve(n * d);
  std::vector<std::int32_t> labels;
  labels.reserve(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t c = 0; c < clusters; ++c) {
    const std::size_t count = n / clusters + (c < n % clusters ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double offset = sigma > 0.0 ? sigma * gauss(rng) : 0.0;
        pts.push_back(static_cast<float>(centers[c][j] + offset));
      }
      labels.push_back(static_cast<std::int32_t>(c));
    }
  }
  return Dataset(std::move(pts), n, d, std::move(labels));
}

Dataset generate_moons(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 2) throw ParameterError("generate_moons needs n >= 2");
  if (noise < 0.0) throw ParameterError("generate_moons needs noise >= 0");
  const std::size_t n_outer = n / 2;
  const std::size_t n_inner = n - n_outer;
  std::vector<float> pts;
  pts.reserve(2 * n);
  std::vector<std::int32_t> labels;
  labels.reserve(n);
  for (double t : linspace(0.0, std::numbers::pi, n_outer, true)) {
    pts.push_back(static_cast<float>(std::cos(t)));
    pts.push_back(static_cast<float>(std::sin(t)));
    labels.push_back(0);
  }
  for (double t : linspace(0.0, std::numbers::pi, n_inner, true)) {
    pts.push_back(static_cast<float>(1.0 - std::cos(t)));
    pts.push_back(static_cast<float>(0.5 - std::sin(t)));
    labels.push_back(1);
  }
  std::mt19937_64 rng(seed);
  add_noise(pts, noise, rng);
  return Dataset(std::move(pts), n, 2, std::move(labels));
}

Dataset generate_circles(std::size_t n, double factor, double noise,
                         std::uint64_t seed) {
  if (n < 2) throw ParameterError("generate_circles needs n >= 2");
  if (!(factor > 0.0 && factor < 1.0)) {
    throw ParameterError("generate_circles needs 0 < factor < 1, got " +
                         std::to_string(factor));
  }
  if (noise < 0.0) throw ParameterError("generate_circles needs noise >= 0");
  const std::size_t n_outer = n / 2;
  const std::size_t n_inner = n - n_outer;
  std::vector<float> pts;
  pts.reserve(2 * n);
  std::vector<std::int32_t> labels;
  labels.reserve(n);
  for (double t : linspace(0.0, 2.0 * std::numbers::pi, n_outer, false)) {
    pts.push_back(static_cast<float>(std::cos(t)));
    pts.push_back(static_cast<float>(std::sin(t)));
    labels.push_back(0);
  }
  for (double t : linspace(0.0, 2.0 * std::numbers::pi, n_inner, false)) {
    pts.push_back(static_cast<float>(factor * std::cos(t)));
    pts.push_back(static_cast<float>(factor * std::sin(t)));
    labels.push_back(1);
  }
  std::mt19937_64 rng(seed);
  add_noise(pts, noise, rng);
  return Dataset(std::move(pts), n, 2, std::move(labels));
}

}  // namespace uspann
