// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/geometry.hpp"

namespace osmheight::geodata {

/// Static Sort-Tile-Recursive packed R-tree. Every item carries a bounding
/// box (for window queries) and a representative point (for distance
/// queries). Results are item indices in ascending order, or ordered by
/// (distance, index) for nearest-neighbour queries, so they match a linear
/// scan exactly.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  SpatialIndex(std::vector<Box> boxes, std::vector<Point2> points, std::size_t node_capacity = 8);

  std::size_t size() const { return boxes_.size(); }
  const Box& box(std::size_t i) const { return boxes_[i]; }
  const Point2& point(std::size_t i) const { return points_[i]; }

  /// Items whose box intersects `query` (closed boxes).
  std::vector<std::size_t> query(const Box& query) const;
  /// Items whose point lies within `radius` of `center` (inclusive).
  std::vector<std::size_t> within(Point2 center, double radius) const;
  /// The k items with the nearest points; ties broken by lower index.
  std::vector<std::size_t> nearest(Point2 center, std::size_t k) const;

 private:
  struct Node {
    Box box;        // union of item boxes
    Box point_box;  // bounding box of item points
    std::size_t first = 0;  // first child (node or item slot)
    std::size_t count = 0;
    bool leaf = true;
  };

  std::vector<Box> boxes_;
  std::vector<Point2> points_;
  std::vector<std::size_t> item_order_;  // leaf slots -> item index
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Index over footprint bounding boxes and centroids.
SpatialIndex build_spatial_index(std::span<const Footprint> footprints);

}  // namespace osmheight::geodata
