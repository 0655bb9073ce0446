// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/floors/detection.hpp"
#include "osmheight/floors/row_clustering.hpp"
#include "osmheight/geodata/footprint.hpp"
#include "osmheight/svi/ray_cast.hpp"

namespace osmheight::floors {

struct FloorEstimate {
  std::string building_id;
  int floors = 1;
  int window_rows = 0;
  bool door_adjusted = false;
};

/// Counts rows holding a window; adds one floor when a door lies outside
/// every window row band. Only a door gives one floor.
FloorEstimate estimate_floors(const RowClustering& r, const DetectionSet& d);

struct FloorHeights {
  double residential = 2.5;
  double commercial_public = 3.5;
  double unknown = 2.5;

  double of(geodata::BuildingFunction f) const;
};

/// Throws DomainError when floors < 1.
double floors_to_height(int floors, geodata::BuildingFunction function,
                        const FloorHeights& heights = {});

struct PseudoLabel {
  std::string building_id;
  double height = 0.0;
  int floors = 0;
  geodata::BuildingFunction function_used = geodata::BuildingFunction::unknown;
  std::size_t n_images = 0;
};

struct FloorConfig {
  ClusterOptions cluster;
  FloorHeights heights;
};

struct PseudoLabelReport {
  std::size_t assignments = 0;
  std::size_t estimated = 0;
  std::size_t labels = 0;
  std::map<std::string, std::size_t> skipped;  // reason -> count

  nlohmann::json to_json() const;
};

struct PseudoLabelResult {
  std::vector<PseudoLabel> labels;  // sorted by building id
  std::vector<FloorEstimate> estimates;  // one per usable assignment
  PseudoLabelReport report;
};

/// One label per assigned building; several images give the median height,
/// ties to the lower value. Assignments without detections or footprint are
/// skipped and reported.
PseudoLabelResult make_pseudo_labels(std::span<const svi::Assignment> assignments,
                                     const std::map<std::string, DetectionSet>& detections,
                                     std::span<const geodata::Footprint> buildings,
                                     const FloorConfig& config = {});

/// CSV columns: building_id, floors, height_m, n_images.
void write_pseudo_labels_csv(const std::filesystem::path& path, std::span<const PseudoLabel> labels);
std::vector<PseudoLabel> read_pseudo_labels_csv(const std::filesystem::path& path);

}  // namespace osmheight::floors
