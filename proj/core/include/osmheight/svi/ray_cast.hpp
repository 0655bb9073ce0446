// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/svi/camera.hpp"

namespace osmheight::svi {

struct Assignment {
  std::string image_id;
  std::string building_id;
  geodata::Point2 hit_point;
  double hit_distance = 0.0;
};

/// Hits closer together than this are ties, won by the lower building id.
inline constexpr double kHitTieTolerance = 1e-9;

/// Nearest footprint boundary crossed by the ray from the camera along its
/// bearing, within `max_range`. Throws InsideBuildingError when the camera
/// is strictly inside a footprint.
std::optional<Assignment> cast_ray(const CameraRecord& cam,
                                   std::span<const geodata::Footprint> footprints,
                                   const geodata::SpatialIndex& index, double max_range = 100.0);

struct AlignConfig {
  double max_range_m = 100.0;
  std::optional<std::set<std::string>> allowlist;
};

/// parsed = assigned + none + errors; filtered records never count as parsed.
struct AlignReport {
  std::size_t parsed = 0;
  std::size_t assigned = 0;
  std::size_t none = 0;
  std::size_t errors = 0;
  std::size_t filtered = 0;
  std::map<std::string, std::size_t> error_reasons;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct AlignResult {
  std::vector<Assignment> assignments;  // input order
  AlignReport report;
};

AlignResult align_images(std::span<const nlohmann::json> records,
                         const geodata::LocalProjection& projection,
                         std::span<const geodata::Footprint> footprints,
                         const geodata::SpatialIndex& index, const AlignConfig& config = {});

/// One image id per line; blank lines and `#` comments ignored.
std::set<std::string> read_allowlist(const std::filesystem::path& path);

/// CSV columns: image_id, building_id, hit_distance_m.
void write_assignments_csv(const std::filesystem::path& path,
                           std::span<const Assignment> assignments);
std::vector<Assignment> read_assignments_csv(const std::filesystem::path& path);

}  // namespace osmheight::svi
