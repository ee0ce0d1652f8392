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
#include "uspann/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "uspann/error.h"
#include "uspann/parallel.h"

namespace uspann {

double recall_at_k(std::span<const std::int32_t> result,
                   std::span<const std::int32_t> truth) {
  if (truth.empty()) throw ParameterError("recall needs a non-empty truth set");
  std::unordered_set<std::int32_t> want(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (std::int32_t id : result) hits += want.erase(id);
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<CurvePoint> sweep_curve(const Searcher& index,
                                    const Dataset& queries,
                                    const GroundTruth& gt, std::size_t k,
                                    std::span<const std::size_t> m_primes) {
  if (gt.queries != queries.size() || gt.k < k || k < 1) {
    throw ParameterError("ground truth does not match the query set or k");
  }
  if (gt.train_checksum != index.dataset().checksum()) {
    throw ParameterError("ground truth was computed on a different dataset");
  }
  for (std::size_t mp : m_primes) {
    if (mp < 1 || mp > index.num_bins()) {
      throw ParameterError("m' value " + std::to_string(mp) + " out of range");
    }
  }
  const std::size_t q = queries.size();
  const std::size_t steps = m_primes.size();
  std::vector<double> recall(q * steps);
  std::vector<double> count(q * steps);
  parallel_for(q, [&](std::size_t qi) {
    const auto truth = gt.row(qi).first(k);
    for (std::size_t s = 0; s < steps; ++s) {
      const QueryResult r = index.query(queries.row(qi), k, m_primes[s]);
      recall[qi * steps + s] = recall_at_k(r.ids, truth);
      count[qi * steps + s] = static_cast<double>(r.candidate_count);
    }
  });
  std::vector<CurvePoint> out(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    double rs = 0.0;
    double cs = 0.0;
    for (std::size_t qi = 0; qi < q; ++qi) {
      rs += recall[qi * steps + s];
      cs += count[qi * steps + s];
    }
    out[s] = CurvePoint{m_primes[s], cs / static_cast<double>(q),
                        rs / static_cast<double>(q)};
  }
  return out;
}

std::vector<std::size_t> default_m_prime_grid(std::size_t m) {
  std::vector<std::size_t> grid;
  if (m <= 32) {
    for (std::size_t i = 1; i <= m; ++i) grid.push_back(i);
    return grid;
  }
  for (std::size_t i = 1; i < m; i *= 2) grid.push_back(i);
  grid.push_back(m);
  return grid;
}

BinBalance bin_balance(const Partition& partition) {
  if (partition.bins == 0 || partition.size() == 0) {
    throw ParameterError("bin balance of an empty partition");
  }
  const auto h = partition.histogram();
  BinBalance out;
  out.max_bin = *std::max_element(h.begin(), h.end());
  out.min_bin = *std::min_element(h.begin(), h.end());
  const double ideal =
      static_cast<double>(partition.size()) / static_cast<double>(partition.bins);
  out.max_over_ideal = static_cast<double>(out.max_bin) / ideal;
  return out;
}

double cluster_purity(const Partition& partition,
                      std::span<const std::int32_t> labels) {
  if (labels.size() != partition.size() || labels.empty()) {
    throw ParameterError("purity needs one label per partitioned point");
  }
  std::size_t majority_total = 0;
  for (std::size_t j = 0; j < partition.bins; ++j) {
    std::map<std::int32_t, std::size_t> counts;
    std::size_t best = 0;
    for (std::int32_t id : partition.bin(j)) {
      best = std::max(best, ++counts[labels[static_cast<std::size_t>(id)]]);
    }
    majority_total += best;
  }
  return static_cast<double>(majority_total) /
         static_cast<double>(partition.size());
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "method,m,m_prime,mean_candidates,recall,k,seed\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.method << ',' << r.m << ',' << r.point.m_prime << ',';
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.point.mean_candidate_count,
                  r.point.recall_at_k);
    out << buf << ',' << r.k << ',' << r.seed << '\n';
  }
}

}  // namespace uspann
