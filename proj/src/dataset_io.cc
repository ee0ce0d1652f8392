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
#include "uspann/dataset_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "uspann/binary_io.h"
#include "uspann/error.h"

namespace uspann {
namespace {

// Shared record walker for fvecs/ivecs. Calls on_value(reader) d times per
// record and returns (rows, d).
template <typename OnValue>
std::pair<std::size_t, std::size_t> walk_vecs(
    std::span<const std::uint8_t> bytes, OnValue on_value) {
  ByteReader reader(bytes);
  if (reader.at_end()) reader.fail("empty vecs file (n >= 1 required)");
  std::size_t rows = 0;
  std::int32_t dim = 0;
  while (!reader.at_end()) {
    const std::size_t record_offset = reader.offset();
    const std::int32_t d = reader.get_i32("record dimension");
    if (d <= 0) {
      throw FormatError("non-positive dimension " + std::to_string(d) +
                        " in record " + std::to_string(rows) +
                        " at byte offset " + std::to_string(record_offset));
    }
    if (rows == 0) {
      dim = d;
    } else if (d != dim) {
      throw FormatError("inconsistent dimension " + std::to_string(d) +
                        " (expected " + std::to_string(dim) + ") in record " +
                        std::to_string(rows) + " at byte offset " +
                        std::to_string(record_offset));
    }
    for (std::int32_t j = 0; j < d; ++j) on_value(reader);
    ++rows;
  }
  return {rows, static_cast<std::size_t>(dim)};
}

std::string format_float(float v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
      field.pop_back();
    }
    out.push_back(field);
  }
  return out;
}

}  // namespace

Dataset parse_fvecs(std::span<const std::uint8_t> bytes) {
  std::vector<float> values;
  auto [rows, dim] = walk_vecs(bytes, [&](ByteReader& r) {
    values.push_back(r.get_f32("float payload"));
  });
  return Dataset(std::move(values), rows, dim);
}

Dataset read_fvecs(const std::filesystem::path& path) {
  return parse_fvecs(read_file_bytes(path));
}

std::vector<std::uint8_t> encode_fvecs(const Dataset& ds) {
  ByteWriter w;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    w.put_i32(static_cast<std::int32_t>(ds.dim()));
    for (float v : ds.row(i)) w.put_f32(v);
  }
  return w.take();
}

void write_fvecs(const std::filesystem::path& path, const Dataset& ds) {
  write_file_bytes(path, encode_fvecs(ds));
}

IntRows parse_ivecs(std::span<const std::uint8_t> bytes) {
  IntRows out;
  auto [rows, dim] = walk_vecs(bytes, [&](ByteReader& r) {
    out.values.push_back(r.get_i32("int payload"));
  });
  out.rows = rows;
  out.cols = dim;
  return out;
}

IntRows read_ivecs(const std::filesystem::path& path) {
  return parse_ivecs(read_file_bytes(path));
}

void write_ivecs(const std::filesystem::path& path, const IntRows& rows) {
  if (rows.values.size() != rows.rows * rows.cols) {
    throw ParameterError("ivecs payload does not match rows x cols");
  }
  ByteWriter w;
  for (std::size_t i = 0; i < rows.rows; ++i) {
    w.put_i32(static_cast<std::int32_t>(rows.cols));
    for (std::size_t j = 0; j < rows.cols; ++j) {
      w.put_i32(rows.values[i * rows.cols + j]);
    }
  }
  write_file_bytes(path, w.bytes());
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("empty CSV file " + path.string());
  }
  const auto header = split_fields(line);
  bool has_label = !header.empty() && header.back() == "label";
  const std::size_t d = header.size() - (has_label ? 1 : 0);
  if (d == 0) throw FormatError("CSV header has no coordinate columns");
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw FormatError("unexpected CSV header column '" + header[j] +
                        "', expected x" + std::to_string(j));
    }
  }
  std::vector<float> pts;
  std::vector<std::int32_t> labels;
  std::size_t n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw FormatError("line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
      try {
        std::size_t used = 0;
        pts.push_back(std::stof(fields[j], &used));
        if (used != fields[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("bad number '" + fields[j] + "' on line " +
                          std::to_string(line_no));
      }
    }
    if (has_label) {
      try {
        labels.push_back(static_cast<std::int32_t>(std::stol(fields[d])));
      } catch (const std::exception&) {
        throw FormatError("bad label '" + fields[d] + "' on line " +
                          std::to_string(line_no));
      }
    }
    ++n;
  }
  if (n == 0) throw FormatError("CSV file has no data rows");
  std::optional<std::vector<std::int32_t>> lab;
  if (has_label) lab = std::move(labels);
  return Dataset(std::move(pts), n, d, std::move(lab));
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    out << (j ? "," : "") << 'x' << j;
  }
  if (ds.has_labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto r = ds.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      out << (j ? "," : "") << format_float(r[j]);
    }
    if (ds.has_labels()) out << ',' << ds.labels()[i];
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(out, ds);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace uspann
