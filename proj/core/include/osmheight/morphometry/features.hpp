// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/geodata/street_network.hpp"
#include "osmheight/morphometry/blocks.hpp"
#include "osmheight/morphometry/centrality.hpp"
#include "osmheight/morphometry/manifest.hpp"

namespace osmheight::morphometry {

struct MorphometryConfig {
  std::vector<double> buffers{50.0, 200.0, 500.0};
  std::vector<double> block_buffers{200.0, 500.0};
  double local_closeness_radius_m = 400.0;
  double default_street_width_m = 6.0;
  unsigned threads = 0;  // 0 = hardware concurrency

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; invalid values throw InputError.
  static MorphometryConfig from_json(const nlohmann::json& j);
};

// Building level.
inline constexpr std::size_t kBuildingBaseCount = 9;
using BuildingBase = std::array<double, kBuildingBaseCount>;
extern const std::array<const char*, kBuildingBaseCount> kBuildingBaseNames;
/// Indices into BuildingBase of the features aggregated over buffers.
extern const std::array<std::size_t, 6> kBufferedBuildingFeatures;

/// `self` is the footprint's position in `all`, which `index` was built on.
BuildingBase building_base_features(std::size_t self, std::span<const geodata::Footprint> all,
                                    const geodata::SpatialIndex& index);

/// 18 values per buffer: for each buffered feature, total/mean/std over
/// other buildings whose centroid lies within the buffer.
std::vector<double> buffered_aggregates(std::size_t self, std::span<const BuildingBase> base,
                                        const geodata::SpatialIndex& index,
                                        std::span<const double> buffers);

// Street level.
inline constexpr std::size_t kStreetBaseCount = 9;
using StreetBase = std::array<double, kStreetBaseCount>;
extern const std::array<const char*, kStreetBaseCount> kStreetBaseNames;

/// Shared pre-pass over the street network: centralities, indexes and the
/// nearest edge of every building. Throws FeatureError on an empty network.
class StreetContext {
 public:
  StreetContext(const geodata::StreetNetwork& net, std::span<const geodata::Footprint> footprints,
                double closeness_radius_m, double default_width_m);

  const geodata::StreetNetwork& network() const { return *net_; }
  /// Edge with the smallest distance to `p`; ties go to the lower index.
  std::size_t nearest_edge(geodata::Point2 p) const;
  std::size_t nearest_edge_of(std::size_t building) const { return nearest_edge_[building]; }
  std::size_t buildings_on_edge(std::size_t edge) const { return edge_load_[edge]; }
  double edge_width(std::size_t edge) const;
  const std::vector<double>& betweenness() const { return betweenness_; }
  const std::vector<double>& closeness() const { return closeness_; }
  const geodata::SpatialIndex& node_index() const { return node_index_; }
  const geodata::SpatialIndex& edge_index() const { return edge_index_; }
  /// Index over nodes with degree >= 3; item i is node intersections()[i].
  const geodata::SpatialIndex& intersection_index() const { return intersection_index_; }
  const std::vector<std::size_t>& intersections() const { return intersections_; }

 private:
  const geodata::StreetNetwork* net_;
  double default_width_m_;
  std::vector<double> betweenness_;
  std::vector<double> closeness_;
  geodata::SpatialIndex node_index_;
  geodata::SpatialIndex edge_index_;
  geodata::SpatialIndex intersection_index_;
  std::vector<std::size_t> intersections_;
  std::vector<std::size_t> nearest_edge_;
  std::vector<std::size_t> edge_load_;
};

StreetBase street_base_features(std::size_t building, const geodata::Footprint& f,
                                const StreetContext& ctx);

/// 11 values per buffer: total/mean/std of distances to segments, distances
/// to intersections and segment lengths, then segment and intersection
/// counts.
std::vector<double> street_buffered_aggregates(const geodata::Footprint& f,
                                               const StreetContext& ctx,
                                               std::span<const double> buffers);

// Block level.
inline constexpr std::size_t kBlockValueCount = 12;
using BlockValues = std::array<double, kBlockValueCount>;
extern const std::array<const char*, kBlockValueCount> kBlockValueNames;

BlockValues block_features(const Block& b, std::span<const geodata::Footprint> footprints);
/// Zero shape values; containment over the given footprints.
BlockValues unbounded_block_features(std::span<const std::size_t> members,
                                     std::span<const geodata::Footprint> footprints);

/// 7 values per buffer: block count, then total/mean/std of block area and
/// of block corner count over blocks whose centroid lies within the buffer.
std::vector<double> block_buffered_aggregates(geodata::Point2 centroid,
                                              std::span<const BlockValues> values,
                                              const geodata::SpatialIndex& block_index,
                                              std::span<const double> buffers);

/// Column roster for a configuration, in matrix order.
FeatureManifest default_manifest(const MorphometryConfig& config = {});

FeatureMatrix assemble_matrix(std::span<const geodata::Footprint> footprints,
                              const geodata::StreetNetwork& net,
                              const MorphometryConfig& config = {});

}  // namespace osmheight::morphometry
