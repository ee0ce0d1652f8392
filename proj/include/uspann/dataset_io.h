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
#ifndef USPANN_DATASET_IO_H_
#define USPANN_DATASET_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "uspann/dataset.h"

namespace uspann {

// fvecs: little-endian records [int32 d][d x float32].
Dataset read_fvecs(const std::filesystem::path& path);
Dataset parse_fvecs(std::span<const std::uint8_t> bytes);
void write_fvecs(const std::filesystem::path& path, const Dataset& ds);
std::vector<std::uint8_t> encode_fvecs(const Dataset& ds);

// ivecs: same framing with an int32 payload (ground-truth files).
struct IntRows {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int32_t> values;  // row-major
};
IntRows read_ivecs(const std::filesystem::path& path);
IntRows parse_ivecs(std::span<const std::uint8_t> bytes);
void write_ivecs(const std::filesystem::path& path, const IntRows& rows);

// CSV with header "x0,x1,...,x{d-1}[,label]". The label column is optional
// on read and written only when the dataset carries labels.
Dataset read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Dataset& ds);
void write_csv(std::ostream& out, const Dataset& ds);

}  // namespace uspann

#endif  // USPANN_DATASET_IO_H_
