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
#ifndef USPANN_PARTITION_H_
#define USPANN_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uspann/dataset.h"
#include "uspann/model.h"

namespace uspann {

// Bin assignment of every dataset point plus its inverse lookup table:
// members[offsets[j], offsets[j+1]) lists the points of bin j ascending.
struct Partition {
  std::size_t bins = 0;
  std::vector<std::int32_t> assignment;
  std::vector<std::int64_t> offsets;
  std::vector<std::int32_t> members;

  static Partition from_assignment(std::vector<std::int32_t> assignment,
                                   std::size_t bins);

  std::size_t size() const { return assignment.size(); }
  std::span<const std::int32_t> bin(std::size_t j) const {
    return {members.data() + offsets[j],
            static_cast<std::size_t>(offsets[j + 1] - offsets[j])};
  }
  std::size_t bin_size(std::size_t j) const {
    return static_cast<std::size_t>(offsets[j + 1] - offsets[j]);
  }
  std::vector<std::size_t> histogram() const;

  // Throws FormatError unless lookup and assignment are exact inverses.
  void validate() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Argmax inference over the whole dataset (ties to the lower bin).
Partition build_partition(const PartitionerModel& model, const Dataset& ds);

}  // namespace uspann

#endif  // USPANN_PARTITION_H_
