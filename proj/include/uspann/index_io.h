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
#ifndef USPANN_INDEX_IO_H_
#define USPANN_INDEX_IO_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "uspann/ensemble_index.h"
#include "uspann/flat_index.h"
#include "uspann/hierarchical_index.h"

namespace uspann {

enum class IndexKind : std::uint32_t { kFlat = 1, kEnsemble = 2, kHierarchical = 3 };

using AnyIndex = std::variant<FlatIndex, EnsembleIndex, HierarchicalIndex>;

const Searcher& as_searcher(const AnyIndex& index);
IndexKind index_kind(const AnyIndex& index);

// Container: "USPINDEX" magic, u32 version, u32 kind, u32 metric, u64 n,
// u64 d, u64 dataset checksum, then a kind-specific body. Models are
// embedded in the model file format; partitions are stored as u64 bins,
// int32[n] assignment, int64[bins+1] offsets, int32[n] members.
// Little-endian throughout. The dataset itself is not stored.
std::vector<std::uint8_t> encode_index(const AnyIndex& index);
void save_index(const AnyIndex& index, const std::filesystem::path& path);

// Throws FormatError on bad magic, version, kind or truncation and
// StaleCacheError when ds is not the dataset the index was built on.
AnyIndex decode_index(std::span<const std::uint8_t> bytes,
                      std::shared_ptr<const Dataset> ds);
AnyIndex load_index(const std::filesystem::path& path,
                    std::shared_ptr<const Dataset> ds);

}  // namespace uspann

#endif  // USPANN_INDEX_IO_H_
