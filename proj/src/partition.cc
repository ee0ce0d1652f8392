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
#include "uspann/partition.h"

#include <string>

#include "uspann/error.h"

namespace uspann {

Partition Partition::from_assignment(std::vector<std::int32_t> assignment,
                                     std::size_t bins) {
  Partition p;
  p.bins = bins;
  p.offsets.assign(bins + 1, 0);
  for (std::int32_t b : assignment) {
    if (b < 0 || static_cast<std::size_t>(b) >= bins) {
      throw ParameterError("bin id " + std::to_string(b) + " out of range");
    }
    ++p.offsets[static_cast<std::size_t>(b) + 1];
  }
  for (std::size_t j = 0; j < bins; ++j) p.offsets[j + 1] += p.offsets[j];
  p.members.resize(assignment.size());
  std::vector<std::int64_t> cursor(p.offsets.begin(), p.offsets.end() - 1);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    p.members[static_cast<std::size_t>(cursor[static_cast<std::size_t>(assignment[i])]++)] =
        static_cast<std::int32_t>(i);
  }
  p.assignment = std::move(assignment);
  return p;
}

std::vector<std::size_t> Partition::histogram() const {
  std::vector<std::size_t> h(bins);
  for (std::size_t j = 0; j < bins; ++j) h[j] = bin_size(j);
  return h;
}

void Partition::validate() const {
  const std::size_t n = assignment.size();
  if (offsets.size() != bins + 1 || members.size() != n || offsets.front() != 0 ||
      offsets.back() != static_cast<std::int64_t>(n)) {
    throw FormatError("partition lookup table has inconsistent sizes");
  }
  for (std::size_t j = 0; j < bins; ++j) {
    if (offsets[j] > offsets[j + 1]) {
      throw FormatError("partition offsets are not monotone");
    }
    std::int32_t prev = -1;
    for (std::int32_t id : bin(j)) {
      if (id <= prev || id < 0 || static_cast<std::size_t>(id) >= n ||
          assignment[static_cast<std::size_t>(id)] != static_cast<std::int32_t>(j)) {
        throw FormatError("partition lookup is not the inverse of assignment");
      }
      prev = id;
    }
  }
}

Partition build_partition(const PartitionerModel& model, const Dataset& ds) {
  return Partition::from_assignment(assign_bins(model, ds), model.bins());
}

}  // namespace uspann
