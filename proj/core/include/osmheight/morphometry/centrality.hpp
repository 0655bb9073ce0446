// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "osmheight/geodata/street_network.hpp"

namespace osmheight::morphometry {

/// Undirected simple graph with positive edge weights. Parallel edges keep
/// the shortest length; self-loops are dropped (they lie on no shortest
/// path).
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  void add_edge(std::size_t u, std::size_t v, double w);
  static WeightedGraph from_streets(const geodata::StreetGraph& g);
};

/// Path lengths within this relative tolerance count as equally short.
inline constexpr double kPathTieTolerance = 1e-9;

/// Brandes betweenness on the weighted graph, each unordered (s, t) pair
/// counted once. Normalised by (n-1)(n-2)/2 when `normalized`.
std::vector<double> betweenness(const WeightedGraph& g, bool normalized = true);

/// Closeness restricted to the nodes within `radius` network distance of
/// `node`: k / sum of distances, where k counts reachable nodes other than
/// `node`; 0 when nothing else is in reach.
double local_closeness(const WeightedGraph& g, std::size_t node, double radius);
std::vector<double> local_closeness_all(const WeightedGraph& g, double radius);

}  // namespace osmheight::morphometry
