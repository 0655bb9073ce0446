// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/geometry.hpp"
#include "osmheight/geodata/projection.hpp"

namespace osmheight::svi {

enum class CameraType { perspective, fisheye, equirectangular };

std::string to_string(CameraType t);

/// Street-view image metadata in the local frame. Field names follow the
/// Mapillary API v4 image entity.
struct CameraRecord {
  std::string image_id;
  geodata::GeoPoint geo;
  geodata::Point2 position;
  double compass_angle = 0.0;  // degrees clockwise from north, [0, 360)
  std::optional<double> altitude;
  std::optional<CameraType> camera_type;
  std::optional<std::int64_t> captured_at;  // epoch milliseconds
  std::optional<std::array<double, 3>> camera_parameters;  // focal, k1, k2
  std::optional<std::array<double, 3>> rotation;  // computed_rotation, unused in 2D
};

/// Wraps an angle into [0, 360).
double normalize_compass(double degrees);

/// Requires `id`, `computed_geometry` (GeoJSON Point) and
/// `computed_compass_angle`; a missing or malformed field throws ParseError
/// naming it. Out-of-range angles are wrapped and a message is appended to
/// `warnings` when given.
CameraRecord parse_camera_metadata(const nlohmann::json& record,
                                   const geodata::LocalProjection& projection,
                                   std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_camera_metadata (uses `geo`, not `position`).
nlohmann::json to_mapillary_json(const CameraRecord& cam);

/// Unit (east, north) vector for a compass bearing.
geodata::Point2 bearing_to_direction(double compass_deg);

}  // namespace osmheight::svi
