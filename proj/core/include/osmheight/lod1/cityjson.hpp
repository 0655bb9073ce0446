// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/projection.hpp"
#include "osmheight/lod1/prism.hpp"

namespace osmheight::lod1 {

inline constexpr double kDefaultQuantization = 1e-8;

struct CityModel {
  std::vector<PrismSolid> solids;
  std::string crs = "local tangent plane, metres east/north of origin";
  geodata::GeoPoint origin;
  nlohmann::json parameters = nlohmann::json::object();

  /// Throws ContractError when the building id is already present.
  void add(PrismSolid solid);
  bool empty() const { return solids.empty(); }
};

struct Lod1Config {
  double min_height_m = kDefaultMinHeight;
  double quantization_m = kDefaultQuantization;

  nlohmann::json to_json() const;
  static Lod1Config from_json(const nlohmann::json& j);
};

struct BuildReport {
  std::size_t built = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> reasons;

  nlohmann::json to_json() const;
};

struct ModelBuild {
  CityModel model;
  BuildReport report;
};

/// Extrudes every footprint that has a height. Footprints without a height
/// ("no_height") or below the minimum ("below_min_height") are skipped.
ModelBuild build_city_model(std::span<const geodata::Footprint> footprints,
                            const std::map<std::string, double>& heights,
                            const Lod1Config& config, geodata::GeoPoint origin);

/// CityJSON 1.1 document with one Building per solid, a shared deduplicated
/// vertex pool and integer coordinates under a transform with the given
/// scale. Throws ExportError for an empty model or when quantization
/// collapses a face.
nlohmann::json to_cityjson(const CityModel& model, double scale = kDefaultQuantization);
void export_cityjson(const CityModel& model, const std::filesystem::path& path,
                     double scale = kDefaultQuantization);

/// A solid read back from a CityJSON document, in real coordinates.
struct ParsedSolid {
  std::string building_id;
  double measured_height = 0.0;
  std::vector<Point3> vertices;
  std::vector<Face> faces;
};

/// Reads Building objects with a Solid geometry. Throws InputError on
/// malformed documents.
std::vector<ParsedSolid> parse_cityjson(const nlohmann::json& doc);
std::vector<ParsedSolid> read_cityjson(const std::filesystem::path& path);

}  // namespace osmheight::lod1
