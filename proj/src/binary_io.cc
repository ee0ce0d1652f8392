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
#include "uspann/binary_io.h"

#include <fstream>
#include <iterator>

#include "uspann/error.h"

namespace uspann {

void ByteReader::require(std::size_t count, std::string_view what) const {
  if (count > remaining()) {
    fail("truncated data while reading " + std::string(what) + " (need " +
         std::to_string(count) + " bytes, " + std::to_string(remaining()) +
         " left)");
  }
}

void ByteReader::fail(const std::string& message) const {
  throw FormatError(message + " at byte offset " + std::to_string(offset_));
}

std::uint8_t ByteReader::get_u8(std::string_view what) {
  require(1, what);
  return bytes_[offset_++];
}

std::uint32_t ByteReader::get_u32(std::string_view what) {
  require(4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes_[offset_ + i]) << (8 * i);
  }
  offset_ += 4;
  return v;
}

std::uint64_t ByteReader::get_u64(std::string_view what) {
  require(8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes_[offset_ + i]) << (8 * i);
  }
  offset_ += 8;
  return v;
}

std::span<const std::uint8_t> ByteReader::get_bytes(std::size_t count,
                                                    std::string_view what) {
  require(count, what);
  auto out = bytes_.subspan(offset_, count);
  offset_ += count;
  return out;
}

void ByteReader::expect_magic(std::string_view magic) {
  require(magic.size(), "magic");
  for (std::size_t i = 0; i < magic.size(); ++i) {
    if (bytes_[offset_ + i] != static_cast<std::uint8_t>(magic[i])) {
      fail("bad magic, expected \"" + std::string(magic) + "\"");
    }
  }
  offset_ += magic.size();
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace uspann
