// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/geodata/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

namespace osmheight::geodata {

SpatialIndex::SpatialIndex(std::vector<Box> boxes, std::vector<Point2> points,
                           std::size_t node_capacity)
    : boxes_(std::move(boxes)), points_(std::move(points)) {
  const std::size_t n = boxes_.size();
  node_capacity = std::max<std::size_t>(2, node_capacity);
  if (n == 0) return;

  // Leaf level: STR tiling by box centre.
  item_order_.resize(n);
  std::iota(item_order_.begin(), item_order_.end(), 0);
  auto cx = [&](std::size_t i) { return boxes_[i].center().x; };
  auto cy = [&](std::size_t i) { return boxes_[i].center().y; };
  std::stable_sort(item_order_.begin(), item_order_.end(),
                   [&](std::size_t a, std::size_t b) { return cx(a) < cx(b); });
  const std::size_t leaves = (n + node_capacity - 1) / node_capacity;
  const std::size_t slices = static_cast<std::size_t>(std::ceil(std::sqrt(double(leaves))));
  const std::size_t slice_len = slices * node_capacity;
  for (std::size_t s = 0; s < n; s += slice_len) {
    auto b = item_order_.begin() + static_cast<std::ptrdiff_t>(s);
    auto e = item_order_.begin() + static_cast<std::ptrdiff_t>(std::min(n, s + slice_len));
    std::stable_sort(b, e, [&](std::size_t l, std::size_t r) { return cy(l) < cy(r); });
  }

  std::vector<std::size_t> level;
  for (std::size_t s = 0; s < n; s += node_capacity) {
    Node node;
    node.first = s;
    node.count = std::min(node_capacity, n - s);
    node.leaf = true;
    for (std::size_t k = s; k < s + node.count; ++k) {
      node.box.expand(boxes_[item_order_[k]]);
      node.point_box.expand(points_[item_order_[k]]);
    }
    level.push_back(nodes_.size());
    nodes_.push_back(node);
  }

  // Upper levels: group consecutive nodes (already spatially coherent).
  while (level.size() > 1) {
    std::vector<std::size_t> next;
    for (std::size_t s = 0; s < level.size(); s += node_capacity) {
      Node node;
      node.first = level[s];
      node.count = std::min(node_capacity, level.size() - s);
      node.leaf = false;
      for (std::size_t k = 0; k < node.count; ++k) {
        node.box.expand(nodes_[level[s + k]].box);
        node.point_box.expand(nodes_[level[s + k]].point_box);
      }
      next.push_back(nodes_.size());
      nodes_.push_back(node);
    }
    level = std::move(next);
  }
  root_ = level.front();
}

std::vector<std::size_t> SpatialIndex::query(const Box& q) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || q.empty()) return out;
  std::vector<std::size_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!node.box.intersects(q)) continue;
    for (std::size_t k = 0; k < node.count; ++k) {
      if (node.leaf) {
        const std::size_t item = item_order_[node.first + k];
        if (boxes_[item].intersects(q)) out.push_back(item);
      } else {
        stack.push_back(node.first + k);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> SpatialIndex::within(Point2 center, double radius) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || radius < 0) return out;
  std::vector<std::size_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.point_box.distance_to(center) > radius) continue;
    for (std::size_t k = 0; k < node.count; ++k) {
      if (node.leaf) {
        const std::size_t item = item_order_[node.first + k];
        if (distance(points_[item], center) <= radius) out.push_back(item);
      } else {
        stack.push_back(node.first + k);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Best-first search. Heap entries are (distance, kind, id) with nodes
// (kind 0) ordered before items (kind 1) at equal distance, so an item is
// only emitted once every node that could hold a tying item is expanded.
std::vector<std::size_t> SpatialIndex::nearest(Point2 center, std::size_t k) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || k == 0) return out;
  using Entry = std::tuple<double, int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(nodes_[root_].point_box.distance_to(center), 0, root_);
  while (!heap.empty() && out.size() < k) {
    const auto [d, kind, id] = heap.top();
    heap.pop();
    if (kind == 1) {
      out.push_back(id);
      continue;
    }
    const Node& node = nodes_[id];
    for (std::size_t c = 0; c < node.count; ++c) {
      if (node.leaf) {
        const std::size_t item = item_order_[node.first + c];
        heap.emplace(distance(points_[item], center), 1, item);
      } else {
        const std::size_t child = node.first + c;
        heap.emplace(nodes_[child].point_box.distance_to(center), 0, child);
      }
    }
  }
  return out;
}

SpatialIndex build_spatial_index(std::span<const Footprint> footprints) {
  std::vector<Box> boxes;
  std::vector<Point2> points;
  boxes.reserve(footprints.size());
  points.reserve(footprints.size());
  for (const auto& f : footprints) {
    boxes.push_back(f.bbox);
    points.push_back(f.centroid);
  }
  return SpatialIndex(std::move(boxes), std::move(points));
}

}  // namespace osmheight::geodata
