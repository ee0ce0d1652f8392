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


// Helpers shared by the unit tests: seeded random data, independent oracles
// and scratch directories.

#ifndef USPANN_TESTS_TEST_UTIL_H_
#define USPANN_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "uspann/dataset.h"

namespace uspann::testing {

inline Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed,
                              double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<float> pts(n * d);
  for (auto& v : pts) v = static_cast<float>(normal(rng));
  return Dataset(std::move(pts), n, d);
}

// Points on a small integer grid, so many pairwise distances tie exactly.
inline Dataset lattice_dataset(std::size_t n, std::size_t d,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, 3);
  std::vector<float> pts(n * d);
  for (auto& v : pts) v = static_cast<float>(coord(rng));
  return Dataset(std::move(pts), n, d);
}

inline Dataset from_rows(const std::vector<std::vector<float>>& rows) {
  std::vector<float> pts;
  for (const auto& r : rows) pts.insert(pts.end(), r.begin(), r.end());
  return Dataset(std::move(pts), rows.size(), rows.front().size());
}

inline long double oracle_sqdist(const Dataset& a, std::size_t i,
                                 const Dataset& b, std::size_t j) {
  long double s = 0;
  for (std::size_t c = 0; c < a.dim(); ++c) {
    long double diff = static_cast<long double>(a.row(i)[c]) -
                       static_cast<long double>(b.row(j)[c]);
    s += diff * diff;
  }
  return s;
}

// Full sort of every candidate by (distance, id); the reference the library's
// partial selection is checked against.
inline std::vector<std::int32_t> oracle_neighbors(const Dataset& base,
                                                  const Dataset& from,
                                                  std::size_t i, std::size_t k,
                                                  bool exclude_self) {
  std::vector<std::pair<long double, std::int32_t>> all;
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (exclude_self && j == i) continue;
    all.emplace_back(oracle_sqdist(from, i, base, j),
                     static_cast<std::int32_t>(j));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::int32_t> ids;
  for (std::size_t r = 0; r < k; ++r) ids.push_back(all[r].second);
  return ids;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("uspann_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace uspann::testing

#endif  // USPANN_TESTS_TEST_UTIL_H_
