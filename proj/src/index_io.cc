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
#include "uspann/index_io.h"

#include <string>

#include "uspann/binary_io.h"
#include "uspann/error.h"

namespace uspann {
namespace {

constexpr char kIndexMagic[] = "USPINDEX";
constexpr std::uint32_t kIndexVersion = 1;

void put_partition(ByteWriter& w, const Partition& p) {
  w.put_u64(p.bins);
  for (std::int32_t a : p.assignment) w.put_i32(a);
  for (std::int64_t o : p.offsets) w.put_i64(o);
  for (std::int32_t m : p.members) w.put_i32(m);
}

Partition get_partition(ByteReader& r, std::size_t n) {
  Partition p;
  p.bins = r.get_u64("partition bins");
  if (p.bins == 0 || p.bins > (1u << 30)) r.fail("implausible bin count");
  if (r.remaining() < n * 8 + (p.bins + 1) * 8) r.fail("truncated partition");
  p.assignment.resize(n);
  for (auto& a : p.assignment) a = r.get_i32("assignment");
  p.offsets.resize(p.bins + 1);
  for (auto& o : p.offsets) o = r.get_i64("offset");
  p.members.resize(n);
  for (auto& m : p.members) m = r.get_i32("member");
  for (std::int32_t a : p.assignment) {
    if (a < 0 || static_cast<std::size_t>(a) >= p.bins) r.fail("bin id out of range");
  }
  p.validate();
  return p;
}

void put_flat(ByteWriter& w, const FlatIndex& f) {
  encode_model(f.model(), w);
  put_partition(w, f.partition());
}

FlatIndex get_flat(ByteReader& r, const std::shared_ptr<const Dataset>& ds,
                   Metric metric) {
  PartitionerModel model = decode_model(r);
  Partition partition = get_partition(r, ds->size());
  try {
    return FlatIndex(std::move(model), std::move(partition), ds, metric);
  } catch (const ParameterError& e) {
    r.fail(std::string("inconsistent flat index: ") + e.what());
  }
}

struct BodyWriter {
  ByteWriter& w;

  void operator()(const FlatIndex& f) const { put_flat(w, f); }

  void operator()(const EnsembleIndex& e) const {
    w.put_u32(static_cast<std::uint32_t>(e.mode()));
    w.put_u32(static_cast<std::uint32_t>(e.size()));
    for (const auto& row : e.weight_history()) {
      for (double v : row) w.put_f64(v);
    }
    for (const auto& m : e.members()) put_flat(w, m);
  }

  void operator()(const HierarchicalIndex& h) const {
    w.put_u32(static_cast<std::uint32_t>(h.fanouts().size()));
    for (std::size_t f : h.fanouts()) w.put_u64(f);
    w.put_u32(static_cast<std::uint32_t>(h.nodes().size()));
    for (const auto& node : h.nodes()) {
      w.put_u8(node.is_leaf() ? 1 : 0);
      w.put_u8(node.early_leaf ? 1 : 0);
      w.put_u32(node.depth);
      w.put_u64(node.point_count);
      if (node.is_leaf()) {
        w.put_i32(node.leaf_id);
      } else {
        w.put_u32(static_cast<std::uint32_t>(node.children.size()));
        for (std::int32_t c : node.children) w.put_i32(c);
        encode_model(*node.model, w);
      }
    }
    put_partition(w, h.leaves());
  }
};

}  // namespace

const Searcher& as_searcher(const AnyIndex& index) {
  return std::visit([](const auto& i) -> const Searcher& { return i; }, index);
}

IndexKind index_kind(const AnyIndex& index) {
  switch (index.index()) {
    case 0: return IndexKind::kFlat;
    case 1: return IndexKind::kEnsemble;
    default: return IndexKind::kHierarchical;
  }
}

std::vector<std::uint8_t> encode_index(const AnyIndex& index) {
  const Searcher& s = as_searcher(index);
  ByteWriter w;
  w.put_magic({kIndexMagic, 8});
  w.put_u32(kIndexVersion);
  w.put_u32(static_cast<std::uint32_t>(index_kind(index)));
  w.put_u32(static_cast<std::uint32_t>(s.metric()));
  w.put_u64(s.dataset().size());
  w.put_u64(s.dataset().dim());
  w.put_u64(s.dataset().checksum());
  std::visit(BodyWriter{w}, index);
  return w.take();
}

void save_index(const AnyIndex& index, const std::filesystem::path& path) {
  write_file_bytes(path, encode_index(index));
}

AnyIndex decode_index(std::span<const std::uint8_t> bytes,
                      std::shared_ptr<const Dataset> ds) {
  if (!ds) throw ParameterError("loading an index needs its dataset");
  ByteReader r(bytes);
  r.expect_magic({kIndexMagic, 8});
  const std::uint32_t version = r.get_u32("index version");
  if (version != kIndexVersion) {
    r.fail("unsupported index version " + std::to_string(version));
  }
  const std::uint32_t kind = r.get_u32("index kind");
  if (kind < 1 || kind > 3) r.fail("unknown index kind " + std::to_string(kind));
  const std::uint32_t metric_tag = r.get_u32("metric");
  if (metric_tag > 1) r.fail("unknown metric tag");
  const auto metric = static_cast<Metric>(metric_tag);
  const std::uint64_t n = r.get_u64("n");
  const std::uint64_t d = r.get_u64("d");
  const std::uint64_t checksum = r.get_u64("dataset checksum");
  if (n != ds->size() || d != ds->dim() || checksum != ds->checksum()) {
    throw StaleCacheError("index was built from a different dataset");
  }

  auto finish = [&](AnyIndex index) {
    if (!r.at_end()) r.fail("trailing bytes after index body");
    return index;
  };

  if (kind == static_cast<std::uint32_t>(IndexKind::kFlat)) {
    return finish(get_flat(r, ds, metric));
  }
  if (kind == static_cast<std::uint32_t>(IndexKind::kEnsemble)) {
    const std::uint32_t mode = r.get_u32("ensemble mode");
    if (mode > 1) r.fail("unknown ensemble mode");
    const std::uint32_t e = r.get_u32("ensemble size");
    if (e == 0) r.fail("empty ensemble");
    if (r.remaining() / 8 / n < e) r.fail("truncated weight history");
    std::vector<std::vector<double>> history(e, std::vector<double>(n));
    for (auto& row : history) {
      for (double& v : row) v = r.get_f64("weight");
    }
    std::vector<FlatIndex> members;
    for (std::uint32_t j = 0; j < e; ++j) members.push_back(get_flat(r, ds, metric));
    try {
      return finish(EnsembleIndex(std::move(members), std::move(history),
                                  static_cast<EnsembleQueryMode>(mode)));
    } catch (const ParameterError& ex) {
      r.fail(std::string("inconsistent ensemble: ") + ex.what());
    }
  }

  const std::uint32_t levels = r.get_u32("level count");
  if (levels == 0 || levels > 64) r.fail("implausible level count");
  std::vector<std::size_t> fanouts(levels);
  for (auto& f : fanouts) f = r.get_u64("fanout");
  const std::uint32_t node_count = r.get_u32("node count");
  if (node_count == 0 || node_count > r.remaining()) r.fail("implausible node count");
  std::vector<HierarchyNode> nodes(node_count);
  for (auto& node : nodes) {
    const bool leaf = r.get_u8("leaf flag") != 0;
    node.early_leaf = r.get_u8("early flag") != 0;
    node.depth = r.get_u32("depth");
    node.point_count = r.get_u64("point count");
    if (leaf) {
      node.leaf_id = r.get_i32("leaf id");
    } else {
      const std::uint32_t children = r.get_u32("child count");
      if (children > r.remaining() / 4) r.fail("implausible child count");
      node.children.resize(children);
      for (auto& c : node.children) c = r.get_i32("child id");
      node.model = decode_model(r);
    }
  }
  Partition leaves = get_partition(r, n);
  try {
    return finish(HierarchicalIndex(std::move(fanouts), std::move(nodes),
                                    std::move(leaves), ds, metric));
  } catch (const ParameterError& ex) {
    r.fail(std::string("inconsistent hierarchy: ") + ex.what());
  }
}

AnyIndex load_index(const std::filesystem::path& path,
                    std::shared_ptr<const Dataset> ds) {
  return decode_index(read_file_bytes(path), std::move(ds));
}

}  // namespace uspann
