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
#include "uspann/hierarchical_index.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "uspann/error.h"
#include "uspann/flat_index.h"

namespace uspann {

HierarchicalIndex::HierarchicalIndex(std::vector<std::size_t> fanouts,
                                     std::vector<HierarchyNode> nodes,
                                     Partition leaves,
                                     std::shared_ptr<const Dataset> ds,
                                     Metric metric)
    : fanouts_(std::move(fanouts)),
      nodes_(std::move(nodes)),
      leaves_(std::move(leaves)),
      dataset_(std::move(ds)),
      metric_(metric) {
  if (!dataset_) throw ParameterError("index needs a dataset");
  if (fanouts_.empty()) throw ParameterError("hierarchy needs at least one level");
  if (nodes_.empty()) throw ParameterError("hierarchy has no nodes");
  if (leaves_.size() != dataset_->size()) {
    throw ParameterError("leaf partition does not cover the dataset");
  }
  std::vector<std::uint8_t> leaf_seen(leaves_.bins, 0);
  std::vector<std::uint8_t> node_seen(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (node.depth > fanouts_.size()) throw ParameterError("node deeper than tree");
    if (node.is_leaf()) {
      if (node.leaf_id < 0 || static_cast<std::size_t>(node.leaf_id) >= leaves_.bins ||
          leaf_seen[static_cast<std::size_t>(node.leaf_id)]++) {
        throw ParameterError("leaf ids must be distinct and within range");
      }
      if (leaves_.bin_size(static_cast<std::size_t>(node.leaf_id)) != node.point_count) {
        throw ParameterError("leaf point count disagrees with the partition");
      }
      continue;
    }
    if (node.depth >= fanouts_.size()) {
      throw ParameterError("internal node at the last level");
    }
    if (node.model->bins() != fanouts_[node.depth] ||
        node.children.size() != node.model->bins() ||
        node.model->arch().input_dim != dataset_->dim()) {
      throw ParameterError("node model does not match its fanout");
    }
    for (std::int32_t c : node.children) {
      if (c <= static_cast<std::int32_t>(i) ||
          static_cast<std::size_t>(c) >= nodes_.size() ||
          node_seen[static_cast<std::size_t>(c)]++ ||
          nodes_[static_cast<std::size_t>(c)].depth != node.depth + 1) {
        throw ParameterError("malformed child links in hierarchy");
      }
    }
  }
  if (std::count(leaf_seen.begin(), leaf_seen.end(), 1) !=
      static_cast<long>(leaves_.bins)) {
    throw ParameterError("every leaf bin needs exactly one leaf node");
  }
  for (auto& node : nodes_) {
    if (node.model) node.model->clear_recorded_forward();
  }
}

std::size_t HierarchicalIndex::model_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const auto& n) { return !n.is_leaf(); }));
}

std::size_t HierarchicalIndex::early_leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const auto& n) { return n.early_leaf; }));
}

void HierarchicalIndex::accumulate(std::size_t node, double mass,
                                   std::span<const float> q,
                                   std::vector<double>& out) const {
  const auto& n = nodes_[node];
  if (n.is_leaf()) {
    out[static_cast<std::size_t>(n.leaf_id)] = mass;
    return;
  }
  const auto probs = n.model->probabilities(q);
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    accumulate(static_cast<std::size_t>(n.children[j]), mass * probs[j], q, out);
  }
}

std::vector<double> HierarchicalIndex::leaf_probabilities(
    std::span<const float> q) const {
  if (q.size() != dataset_->dim()) {
    throw ParameterError("query dimension does not match the index");
  }
  std::vector<double> out(leaves_.bins, 0.0);
  accumulate(0, 1.0, q, out);
  return out;
}

std::vector<std::int32_t> HierarchicalIndex::candidate_set(
    std::span<const float> q, std::size_t m_prime) const {
  check_query(q, m_prime);
  return gather_bins(leaves_, rank_bins(leaf_probabilities(q), m_prime));
}

namespace {

struct TreeBuilder {
  const Dataset& ds;
  const Architecture& arch;
  const TrainConfig& cfg;
  const std::vector<std::size_t>& fanouts;
  const KnnMatrix* root_knn;
  std::vector<HierarchyNode> nodes;
  std::vector<std::int32_t> assignment;
  std::int32_t next_leaf = 0;

  std::int32_t make_leaf(std::span<const std::uint32_t> points,
                         std::uint32_t depth, bool early) {
    HierarchyNode leaf;
    leaf.leaf_id = next_leaf++;
    leaf.depth = depth;
    leaf.early_leaf = early;
    leaf.point_count = points.size();
    for (std::uint32_t p : points) assignment[p] = leaf.leaf_id;
    nodes.push_back(std::move(leaf));
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  std::int32_t build(const std::vector<std::uint32_t>& points,
                     std::uint32_t depth) {
    if (depth == fanouts.size()) return make_leaf(points, depth, false);
    const std::size_t fanout = fanouts[depth];
    if (points.size() < std::max(fanout, cfg.k_prime + 1)) {
      return make_leaf(points, depth, true);
    }
    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes.back().depth = depth;
    nodes.back().point_count = points.size();

    const bool whole = points.size() == ds.size();
    const Dataset subset = whole ? ds : ds.subset(points);
    const KnnMatrix knn = (whole && root_knn)
                              ? *root_knn
                              : build_knn_matrix(subset, cfg.k_prime);
    Architecture node_arch = arch;
    node_arch.input_dim = ds.dim();
    node_arch.bins = fanout;
    TrainConfig node_cfg = cfg;
    node_cfg.seed = cfg.seed + static_cast<std::uint64_t>(id);
    node_cfg.point_weights.reset();
    PartitionerModel model = train(subset, knn, node_arch, node_cfg).model;

    std::vector<std::vector<std::uint32_t>> groups(fanout);
    const auto local = assign_bins(model, subset);
    for (std::size_t i = 0; i < points.size(); ++i) {
      groups[static_cast<std::size_t>(local[i])].push_back(points[i]);
    }
    std::vector<std::int32_t> children;
    for (const auto& g : groups) children.push_back(build(g, depth + 1));
    nodes[static_cast<std::size_t>(id)].model = std::move(model);
    nodes[static_cast<std::size_t>(id)].children = std::move(children);
    return id;
  }
};

}  // namespace

HierarchicalIndex build_hierarchical(std::shared_ptr<const Dataset> ds,
                                     const Architecture& arch,
                                     const TrainConfig& cfg,
                                     std::vector<std::size_t> fanouts,
                                     Metric metric, const KnnMatrix* root_knn) {
  if (!ds) throw ParameterError("hierarchy needs a dataset");
  if (fanouts.empty()) throw ParameterError("fanouts must not be empty");
  double leaf_bins = 1.0;
  for (std::size_t f : fanouts) {
    if (f < 2) throw ParameterError("every fanout must be >= 2");
    leaf_bins *= static_cast<double>(f);
  }
  if (static_cast<double>(ds->size()) / leaf_bins < 1.0) {
    throw ParameterError("dataset too small for the requested fanouts");
  }
  if (root_knn && (root_knn->n != ds->size() || root_knn->k != cfg.k_prime ||
                   root_knn->source_checksum != ds->checksum())) {
    throw ParameterError("root k'-NN matrix does not match dataset/config");
  }
  TreeBuilder b{*ds, arch, cfg, fanouts, root_knn, {}, std::vector<std::int32_t>(ds->size(), -1)};
  std::vector<std::uint32_t> all(ds->size());
  std::iota(all.begin(), all.end(), 0u);
  b.build(all, 0);
  Partition leaves = Partition::from_assignment(std::move(b.assignment),
                                                static_cast<std::size_t>(b.next_leaf));
  return HierarchicalIndex(std::move(fanouts), std::move(b.nodes),
                           std::move(leaves), std::move(ds), metric);
}

}  // namespace uspann
