// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/geometry.hpp"
#include "osmheight/geodata/projection.hpp"

namespace osmheight::geodata {

/// Street points closer than this are merged into one node.
inline constexpr double kStreetSnapTolerance = 1e-6;

struct StreetSegment {
  std::string id;
  std::vector<Point2> polyline;
  std::optional<double> width_hint;

  double length() const;
};

/// An edge of the noded graph: a piece of one input segment running between
/// two nodes, with the intermediate shape points kept.
struct StreetEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::vector<Point2> polyline;  // front() == nodes[u], back() == nodes[v]
  double length = 0.0;
  std::size_t segment = 0;  // index into StreetNetwork::segments
};

struct StreetGraph {
  std::vector<Point2> nodes;
  std::vector<StreetEdge> edges;
  std::vector<std::vector<std::size_t>> incident;  // node -> edge indices

  /// Number of edge ends at the node (a self-loop counts twice).
  std::size_t degree(std::size_t node) const;
};

struct StreetNetwork {
  std::vector<StreetSegment> segments;
  StreetGraph graph;

  bool empty() const { return graph.edges.empty(); }
};

/// Nodes every crossing and touching point of the input segments. Nodes are
/// segment endpoints plus intersection points; interior shape points that
/// touch nothing stay inside their edge. Consecutive duplicate points are
/// dropped and segments shorter than the merge tolerance are discarded.
StreetNetwork build_street_network(std::vector<StreetSegment> segments);

/// Parses a leading decimal number from an OSM width tag ("6", "6.5 m").
std::optional<double> parse_width_tag(const std::string& value);

/// Reads (Multi)LineString features. Throws InputError for unreadable input
/// and EmptyNetworkError when no valid linestring survives.
StreetNetwork parse_streets(const nlohmann::json& feature_collection,
                            const LocalProjection& projection);
StreetNetwork load_streets(const std::filesystem::path& path, const LocalProjection& projection);

}  // namespace osmheight::geodata
