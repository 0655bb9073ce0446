// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/pipeline/config.hpp"
#include "osmheight/pipeline/io.hpp"
#include "osmheight/ssl/experiment.hpp"

namespace osmheight::pipeline {

namespace fs = std::filesystem;

/// Footprints in a local frame centred on the bounding box of the building
/// file. Every stage uses this frame so cameras and streets line up.
struct Scene {
  geodata::LocalProjection projection{geodata::GeoPoint{}};
  std::vector<geodata::Footprint> footprints;
  geodata::LoadReport report;
};
Scene load_scene(const fs::path& buildings);

/// features.csv + manifest.json.
StageRecord stage_features(const fs::path& buildings, const fs::path& streets,
                           const morphometry::MorphometryConfig& config, const fs::path& out_dir);

/// assignments.csv. An empty allowlist path keeps every image.
StageRecord stage_align(const fs::path& buildings, const fs::path& cameras,
                        const SviSettings& settings, const fs::path& allowlist,
                        const fs::path& out_dir);

/// pseudo_labels.csv.
StageRecord stage_floors(const fs::path& buildings, const fs::path& assignments,
                         const fs::path& detections, const floors::FloorConfig& config,
                         const fs::path& out_dir);

/// Fits one model on the RAW/pseudo mix and writes model.ohrf (forests) or
/// model.json. Without RAW labels the mix is all pseudo-labels and vice
/// versa. Returns the model path in report["model"].
StageRecord stage_train(const fs::path& features, const fs::path& manifest,
                        const fs::path& raw_labels, const fs::path& pseudo_labels,
                        const RegressionConfig& config, std::uint64_t seed,
                        const fs::path& out_dir);

/// report.csv + report.json from a model-comparison experiment.
StageRecord stage_experiment(const fs::path& features, const fs::path& manifest,
                             const fs::path& raw_labels, const fs::path& pseudo_labels,
                             const ssl::ExperimentConfig& config, const fs::path& out_dir);

/// metrics.json for a saved model against labelled buildings.
StageRecord stage_evaluate(const fs::path& model, const fs::path& features,
                           const fs::path& manifest, const fs::path& labels,
                           const fs::path& out_dir);

/// predictions.csv (building_id, height_m) for every feature row.
StageRecord stage_predict(const fs::path& model, const fs::path& features,
                          const fs::path& manifest, const fs::path& out_dir);

/// city.json and/or city.obj.
StageRecord stage_build_lod1(const fs::path& buildings, const fs::path& heights,
                             const lod1::Lod1Config& config, ExportFormat format,
                             const fs::path& out_dir);

/// Runs every stage whose inputs are configured and writes
/// run_manifest.json into the output directory.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace osmheight::pipeline
