// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/street_network.hpp"

namespace osmheight::morphometry {

/// A bounded face of the noded street graph.
struct Block {
  std::string id;
  geodata::Polygon polygon;  // counter-clockwise exterior, dangling spurs removed
  geodata::Point2 centroid;
  double area = 0.0;
  std::vector<std::string> building_ids;
  std::vector<std::size_t> buildings;  // indices into the footprint list
};

struct BlockPartition {
  std::vector<Block> blocks;
  /// Block index per footprint; nullopt = the synthetic unbounded block.
  std::vector<std::optional<std::size_t>> membership;
  std::vector<std::size_t> unbounded;  // footprints outside every face
};

/// Bounded faces of the planar street graph, found by angular half-edge
/// traversal (at each node, continue along the next edge clockwise from the
/// one arrived on). Faces with non-positive area are discarded.
std::vector<Block> extract_faces(const geodata::StreetNetwork& net);

/// Extracts faces and assigns every footprint to the smallest face whose
/// polygon contains its centroid.
BlockPartition tessellate_blocks(const geodata::StreetNetwork& net,
                                 std::span<const geodata::Footprint> footprints);

}  // namespace osmheight::morphometry
