// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "osmheight/floors/floor_estimate.hpp"
#include "osmheight/lod1/cityjson.hpp"
#include "osmheight/morphometry/features.hpp"
#include "osmheight/ssl/model.hpp"

namespace osmheight::pipeline {

/// Input and output locations. Empty optional inputs are skipped by the
/// stages that would consume them.
struct PipelinePaths {
  std::filesystem::path buildings;
  std::filesystem::path streets;
  std::filesystem::path cameras;
  std::filesystem::path detections;
  std::filesystem::path raw_labels;
  std::filesystem::path allowlist;
  std::filesystem::path out_dir = "out";
};

struct SviSettings {
  double max_range_m = 100.0;
};

struct RegressionConfig {
  ssl::ModelSpec model;
  double mix_a = 0.5;
  std::optional<std::size_t> training_size;  // default: largest feasible mix
};

enum class ExportFormat { cityjson, obj, both };
std::string to_string(ExportFormat f);
ExportFormat export_format_from_string(const std::string& s);

struct PipelineConfig {
  PipelinePaths paths;
  morphometry::MorphometryConfig morphometry;
  SviSettings svi;
  floors::FloorConfig floors;
  RegressionConfig regression;
  lod1::Lod1Config lod1;
  ExportFormat format = ExportFormat::cityjson;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  /// Relative paths are resolved against `base_dir`. Unknown keys throw
  /// InputError.
  static PipelineConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);

  /// SHA-256 of the canonical config without the output directory.
  std::string hash() const;
  /// Throws InputError when buildings or streets are unset or any set input
  /// path does not exist.
  void validate() const;
};

nlohmann::json floor_config_to_json(const floors::FloorConfig& c);
floors::FloorConfig floor_config_from_json(const nlohmann::json& j);

}  // namespace osmheight::pipeline
