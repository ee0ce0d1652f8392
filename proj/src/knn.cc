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
#include "uspann/knn.h"

#include <algorithm>
#include <string>
#include <utility>

#include "uspann/binary_io.h"
#include "uspann/error.h"
#include "uspann/parallel.h"

namespace uspann {
namespace {

constexpr char kCacheMagic[] = "USPKNN01";
constexpr std::uint32_t kCacheVersion = 1;

using Candidate = std::pair<double, std::int32_t>;  // (squared distance, id)

// Selects the k smallest (distance, id) pairs in ascending order.
void select_k(std::vector<Candidate>& cands, std::size_t k) {
  std::partial_sort(cands.begin(), cands.begin() + static_cast<long>(k),
                    cands.end());
}

}  // namespace

KnnMatrix build_knn_matrix(const Dataset& ds, std::size_t k, Metric) {
  const std::size_t n = ds.size();
  if (k < 1 || k >= n) {
    throw ParameterError("k' must satisfy 1 <= k' < n, got k'=" +
                         std::to_string(k) + " n=" + std::to_string(n));
  }
  KnnMatrix out;
  out.n = n;
  out.k = k;
  out.source_checksum = ds.checksum();
  out.neighbors.resize(n * k);
  parallel_for(n, [&](std::size_t i) {
    std::vector<Candidate> cands;
    cands.reserve(n - 1);
    const auto p = ds.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cands.emplace_back(squared_l2(p, ds.row(j)), static_cast<std::int32_t>(j));
    }
    select_k(cands, k);
    for (std::size_t r = 0; r < k; ++r) out.neighbors[i * k + r] = cands[r].second;
  });
  return out;
}

GroundTruth ground_truth(const Dataset& train, const Dataset& queries,
                         std::size_t k, Metric metric) {
  if (train.dim() != queries.dim()) {
    throw ParameterError("query dimension " + std::to_string(queries.dim()) +
                         " does not match train dimension " +
                         std::to_string(train.dim()));
  }
  const std::size_t n = train.size();
  if (k < 1 || k > n) {
    throw ParameterError("ground truth needs 1 <= k <= n");
  }
  GroundTruth gt;
  gt.queries = queries.size();
  gt.k = k;
  gt.train_checksum = train.checksum();
  gt.neighbors.resize(gt.queries * k);
  gt.distances.resize(gt.queries * k);
  parallel_for(gt.queries, [&](std::size_t qi) {
    std::vector<Candidate> cands;
    cands.reserve(n);
    const auto q = queries.row(qi);
    for (std::size_t j = 0; j < n; ++j) {
      cands.emplace_back(squared_l2(q, train.row(j)), static_cast<std::int32_t>(j));
    }
    select_k(cands, k);
    for (std::size_t r = 0; r < k; ++r) {
      gt.neighbors[qi * k + r] = cands[r].second;
      gt.distances[qi * k + r] = from_squared(metric, cands[r].first);
    }
  });
  return gt;
}

std::vector<std::uint8_t> encode_knn_cache(const KnnMatrix& m) {
  ByteWriter w;
  w.put_magic({kCacheMagic, 8});
  w.put_u32(kCacheVersion);
  w.put_u64(m.n);
  w.put_u64(m.k);
  w.put_u64(m.source_checksum);
  for (std::int32_t v : m.neighbors) w.put_i32(v);
  return w.take();
}

void save_knn_cache(const KnnMatrix& m, const std::filesystem::path& path) {
  write_file_bytes(path, encode_knn_cache(m));
}

KnnMatrix decode_knn_cache(std::span<const std::uint8_t> bytes,
                           std::uint64_t expected_checksum) {
  ByteReader r(bytes);
  r.expect_magic({kCacheMagic, 8});
  const std::uint32_t version = r.get_u32("version");
  if (version != kCacheVersion) {
    r.fail("unsupported k'-NN cache version " + std::to_string(version));
  }
  KnnMatrix m;
  m.n = r.get_u64("n");
  m.k = r.get_u64("k'");
  m.source_checksum = r.get_u64("dataset checksum");
  if (m.k == 0 || m.k >= m.n) r.fail("invalid k'/n in cache header");
  if (r.remaining() != m.n * m.k * 4) {
    r.fail("cache payload holds " + std::to_string(r.remaining()) +
           " bytes, expected " + std::to_string(m.n * m.k * 4));
  }
  if (m.source_checksum != expected_checksum) {
    throw StaleCacheError("k'-NN cache was built from a different dataset");
  }
  m.neighbors.resize(m.n * m.k);
  for (auto& v : m.neighbors) {
    v = r.get_i32("neighbor id");
    if (v < 0 || static_cast<std::size_t>(v) >= m.n) {
      r.fail("neighbor id out of range");
    }
  }
  return m;
}

KnnMatrix load_knn_cache(const std::filesystem::path& path,
                         std::uint64_t expected_checksum) {
  return decode_knn_cache(read_file_bytes(path), expected_checksum);
}

}  // namespace uspann
