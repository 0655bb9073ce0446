// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/floors/detection.hpp"
#include "osmheight/geodata/projection.hpp"
#include "osmheight/random.hpp"
#include "osmheight/ssl/dataset.hpp"

namespace osmheight::pipeline {

/// Truth height = intercept + area_weight * footprint area
///   + elongation_weight * (depth / width)
///   + centre_weight * (distance of the block centre to the city centre / 100 m)
///   + N(0, noise_sd), floored at 2.5 m. The centre term is constant within a
/// block.
struct HeightModel {
  double intercept = 6.0;
  double area_weight = 0.04;  // m per m^2
  double elongation_weight = 0.5;
  double centre_weight = 0.0;  // m per 100 m
  double noise_sd = 1.0;
};

enum class FloorRounding { nearest, down };

struct SyntheticCitySpec {
  std::uint64_t seed = 0;
  int grid_blocks = 5;  // k x k blocks bounded by k + 1 streets each way
  int buildings_per_block = 4;
  double block_size_m = 100.0;
  double setback_m = 6.0;      // street centreline to lot edge
  double max_rotation_deg = 8.0;
  double commercial_fraction = 0.0;
  HeightModel height;
  double pseudo_error_p = 0.0;  // chance the facade shows one floor more or less
  FloorRounding floor_rounding = FloorRounding::nearest;
  double camera_fraction = 1.0;  // share of buildings photographed
  double row_jitter = 0.0;       // row-centre jitter, fraction of row spacing
  geodata::GeoPoint origin{8.69, 49.41};

  nlohmann::json to_json() const;
  /// Missing keys keep defaults; unknown keys throw InputError.
  static SyntheticCitySpec from_json(const nlohmann::json& j);
};

struct SyntheticBuilding {
  std::string id;
  std::size_t block = 0;
  double height = 0.0;
  int floors = 0;        // quantized truth
  int shown_floors = 0;  // floors drawn on the facade image, if photographed
  bool photographed = false;
};

struct SyntheticCity {
  nlohmann::json buildings;  // GeoJSON FeatureCollection
  nlohmann::json streets;    // GeoJSON FeatureCollection
  std::vector<nlohmann::json> cameras;  // Mapillary-style image records
  std::vector<floors::DetectionSet> detections;
  std::vector<SyntheticBuilding> truth;  // sorted by id
  std::size_t block_count = 0;

  std::vector<ssl::HeightLabel> truth_labels() const;
  /// buildings.geojson, streets.geojson, cameras.jsonl, detections.jsonl,
  /// truth.csv (building_id, height_m, floors, block).
  void write(const std::filesystem::path& dir) const;
};

/// Windows (and sometimes a door) for a facade with `floors` rows: 1-6
/// windows per row, row centres evenly spaced and jittered by up to
/// `row_jitter` of the spacing.
floors::DetectionSet synthesize_facade(const std::string& image_id, int floors, double row_jitter,
                                       Rng& rng);

SyntheticCity generate_synthetic_city(const SyntheticCitySpec& spec);

}  // namespace osmheight::pipeline
