// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/geometry.hpp"
#include "osmheight/geodata/projection.hpp"

namespace osmheight::geodata {

enum class BuildingFunction { residential, commercial_public, unknown };

std::string_view to_string(BuildingFunction f);
/// Accepts the names produced by to_string. Throws InputError otherwise.
BuildingFunction building_function_from_string(std::string_view s);

using Tags = std::map<std::string, std::string>;

/// Tag value -> function lookup. `building` is consulted first, then
/// `amenity`; anything unmapped is `unknown`.
struct FunctionMapping {
  std::map<std::string, BuildingFunction> building;
  std::map<std::string, BuildingFunction> amenity;

  static FunctionMapping defaults();
  BuildingFunction classify(const Tags& tags) const;
};

/// One building polygon in the local metric frame. Exterior is
/// counter-clockwise, holes clockwise, all rings closed.
struct Footprint {
  std::string id;
  Polygon polygon;
  BuildingFunction function = BuildingFunction::unknown;
  Tags tags;

  // Derived once at construction; footprints are immutable after load.
  double area = 0.0;
  Point2 centroid;
  Box bbox;

  static Footprint create(std::string id, Polygon polygon,
                          BuildingFunction function = BuildingFunction::unknown, Tags tags = {});
  const Ring& exterior() const { return polygon.exterior; }
  const std::vector<Ring>& holes() const { return polygon.holes; }
};

/// Vertices closer than this are merged during cleaning.
inline constexpr double kRingMergeTolerance = 1e-9;

/// Removes consecutive duplicates, closes the ring and orients it (CCW when
/// `ccw`). Returns nullopt with `reason` set when fewer than three distinct
/// points remain, the ring has zero area or it self-intersects.
std::optional<Ring> clean_ring(const std::vector<Point2>& raw, bool ccw, std::string* reason);

struct LoadReport {
  std::size_t read = 0;
  std::size_t kept = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> reasons;

  void skip(const std::string& reason) {
    ++skipped;
    ++reasons[reason];
  }
  nlohmann::json to_json() const;
};

struct BuildingLoad {
  std::vector<Footprint> footprints;
  LoadReport report;
};

/// Every WGS84 position found in a GeoJSON document (used to centre the
/// local projection).
std::vector<GeoPoint> collect_positions(const nlohmann::json& geojson);

BuildingLoad parse_buildings(const nlohmann::json& feature_collection,
                             const LocalProjection& projection,
                             const FunctionMapping& mapping = FunctionMapping::defaults());

/// Reads a GeoJSON FeatureCollection of (Multi)Polygons. Multipolygons are
/// split into one footprint per part with ids `<id>#<k>`.
BuildingLoad load_buildings(const std::filesystem::path& path, const LocalProjection& projection,
                            const FunctionMapping& mapping = FunctionMapping::defaults());

/// Feature id: top-level "id", else properties "@id"/"osm_id"/"id", else
/// "feature-<index>".
std::string feature_id(const nlohmann::json& feature, std::size_t index);

}  // namespace osmheight::geodata
