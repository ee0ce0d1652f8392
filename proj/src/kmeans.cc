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
#include "uspann/kmeans.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "uspann/error.h"

namespace uspann {
namespace {

double squared_to_centroid(std::span<const float> p, const Matrix& c, long row) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double diff = static_cast<double>(p[j]) - c(row, static_cast<long>(j));
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<std::int32_t> assign_to_nearest(const Dataset& ds,
                                            const Matrix& centroids) {
  std::vector<std::int32_t> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto p = ds.row(i);
    double best = std::numeric_limits<double>::infinity();
    long best_c = 0;
    for (long c = 0; c < centroids.rows(); ++c) {
      const double d = squared_to_centroid(p, centroids, c);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    out[i] = static_cast<std::int32_t>(best_c);
  }
  return out;
}

Matrix recompute_centroids(const Dataset& ds,
                           std::span<const std::int32_t> assignment,
                           const Matrix& previous) {
  Matrix sums = Matrix::Zero(previous.rows(), previous.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(previous.rows()), 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto c = static_cast<long>(assignment[i]);
    const auto p = ds.row(i);
    for (std::size_t j = 0; j < p.size(); ++j) sums(c, static_cast<long>(j)) += p[j];
    ++counts[static_cast<std::size_t>(c)];
  }
  Matrix out = previous;
  for (long c = 0; c < out.rows(); ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      out.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
  return out;
}

double within_cluster_ss(const Dataset& ds, const Matrix& centroids,
                         std::span<const std::int32_t> assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    total += squared_to_centroid(ds.row(i), centroids, assignment[i]);
  }
  return total;
}

// Moves the point farthest from the largest cluster's centroid into each
// empty cluster.
void repair_empty_clusters(const Dataset& ds, std::vector<std::int32_t>& assignment,
                           Matrix& centroids) {
  const std::size_t n = ds.size();
  const auto m = static_cast<std::size_t>(centroids.rows());
  const long d = centroids.cols();
  for (;;) {
    std::vector<std::size_t> counts(m, 0);
    for (std::int32_t a : assignment) ++counts[static_cast<std::size_t>(a)];
    const auto empty = std::find(counts.begin(), counts.end(), 0u);
    if (empty == counts.end()) break;
    const auto largest = static_cast<std::int32_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (counts[static_cast<std::size_t>(largest)] < 2) break;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (assignment[i] != largest) continue;
      const double dd = squared_to_centroid(ds.row(i), centroids, largest);
      if (dd > far_d) {
        far_d = dd;
        far = i;
      }
    }
    const auto e = static_cast<std::int32_t>(empty - counts.begin());
    assignment[far] = e;
    for (long j = 0; j < d; ++j) centroids(e, j) = ds.row(far)[static_cast<std::size_t>(j)];
    centroids = recompute_centroids(ds, assignment, centroids);
  }
}

KMeansPartition kmeans_partition(const Dataset& ds, std::size_t m,
                                 std::size_t max_iters, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (m < 1 || m > n) throw ParameterError("k-means needs 1 <= m <= n");
  if (max_iters < 1) throw ParameterError("k-means needs max_iters >= 1");
  const long d = static_cast<long>(ds.dim());
  std::mt19937_64 rng(seed);

  // k-means++ seeding.
  Matrix centroids(static_cast<long>(m), d);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> chosen(n, 0);
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  for (std::size_t c = 0; c < m; ++c) {
    chosen[pick] = 1;
    for (long j = 0; j < d; ++j) {
      centroids(static_cast<long>(c), j) = ds.row(pick)[static_cast<std::size_t>(j)];
    }
    if (c + 1 == m) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i],
                            squared_to_centroid(ds.row(i), centroids, static_cast<long>(c)));
      total += nearest[i];
    }
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        acc += nearest[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // rounding left target just past the sum
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every point coincides with a chosen center; take any unchosen one.
      pick = static_cast<std::size_t>(
          std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
    }
  }

  KMeansPartition out;
  std::vector<std::int32_t> assignment = assign_to_nearest(ds, centroids);
  for (std::size_t it = 0; it < max_iters; ++it) {
    centroids = recompute_centroids(ds, assignment, centroids);

    repair_empty_clusters(ds, assignment, centroids);

    ++out.iterations;
    std::vector<std::int32_t> next = assign_to_nearest(ds, centroids);
    if (next == assignment) break;
    assignment = std::move(next);
  }
  // Duplicate points can tie a stolen point back to its old centroid.
  repair_empty_clusters(ds, assignment, centroids);
  out.centroids = std::move(centroids);
  out.partition = Partition::from_assignment(std::move(assignment), m);
  return out;
}

KMeansIndex::KMeansIndex(KMeansPartition part, std::shared_ptr<const Dataset> ds,
                         Metric metric)
    : part_(std::move(part)), dataset_(std::move(ds)), metric_(metric) {
  if (!dataset_) throw ParameterError("index needs a dataset");
  if (part_.partition.size() != dataset_->size() ||
      static_cast<std::size_t>(part_.centroids.cols()) != dataset_->dim() ||
      static_cast<std::size_t>(part_.centroids.rows()) != part_.partition.bins) {
    throw ParameterError("k-means partition does not match the dataset");
  }
}

std::vector<std::uint32_t> KMeansIndex::probe_order(std::span<const float> q) const {
  const auto m = static_cast<std::size_t>(part_.centroids.rows());
  std::vector<double> dist(m);
  for (std::size_t c = 0; c < m; ++c) {
    dist[c] = squared_to_centroid(q, part_.centroids, static_cast<long>(c));
  }
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return dist[a] < dist[b]; });
  return order;
}

std::vector<std::int32_t> KMeansIndex::candidate_set(std::span<const float> q,
                                                     std::size_t m_prime) const {
  check_query(q, m_prime);
  const auto order = probe_order(q);
  std::vector<std::int32_t> out;
  for (std::size_t r = 0; r < m_prime; ++r) {
    auto members = part_.partition.bin(order[r]);
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

}  // namespace uspann
