// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/pipeline/stages.hpp"

#include <map>

#include "osmheight/errors.hpp"
#include "osmheight/floors/floor_estimate.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/geodata/street_network.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/lod1/obj.hpp"
#include "osmheight/random.hpp"
#include "osmheight/ssl/metrics.hpp"
#include "osmheight/svi/ray_cast.hpp"

namespace osmheight::pipeline {

using nlohmann::json;

Scene load_scene(const fs::path& buildings) {
  const json doc = read_json_file(buildings);
  const auto positions = geodata::collect_positions(doc);
  if (positions.empty()) throw InputError("building file contains no coordinates");
  Scene s{geodata::LocalProjection::centered_on(positions), {}, {}};
  auto load = geodata::parse_buildings(doc, s.projection);
  if (load.footprints.empty()) throw InputError("no valid building footprints");
  s.footprints = std::move(load.footprints);
  s.report = std::move(load.report);
  return s;
}

StageRecord stage_features(const fs::path& buildings, const fs::path& streets,
                           const morphometry::MorphometryConfig& config, const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "features";
  rec.input("buildings", buildings);
  rec.input("streets", streets);
  const Scene scene = load_scene(buildings);
  const auto net = geodata::load_streets(streets, scene.projection);
  const auto matrix = morphometry::assemble_matrix(scene.footprints, net, config);
  matrix.write(out_dir / "features.csv", out_dir / "manifest.json");
  rec.output(out_dir / "features.csv");
  rec.output(out_dir / "manifest.json");
  rec.report = {{"buildings", scene.report.to_json()},
                {"features", matrix.cols()},
                {"manifest_hash", matrix.manifest_hash()},
                {"config", config.to_json()}};
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_align(const fs::path& buildings, const fs::path& cameras,
                        const SviSettings& settings, const fs::path& allowlist,
                        const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "align";
  rec.input("buildings", buildings);
  rec.input("cameras", cameras);
  rec.input("allowlist", allowlist);
  const Scene scene = load_scene(buildings);
  const auto index = geodata::build_spatial_index(scene.footprints);
  svi::AlignConfig config;
  config.max_range_m = settings.max_range_m;
  if (!allowlist.empty()) config.allowlist = svi::read_allowlist(allowlist);
  const auto records = read_json_lines(cameras);
  const auto result = svi::align_images(records, scene.projection, scene.footprints, index, config);
  svi::write_assignments_csv(out_dir / "assignments.csv", result.assignments);
  rec.output(out_dir / "assignments.csv");
  rec.report = result.report.to_json();
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_floors(const fs::path& buildings, const fs::path& assignments,
                         const fs::path& detections, const floors::FloorConfig& config,
                         const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "floors";
  rec.input("buildings", buildings);
  rec.input("assignments", assignments);
  rec.input("detections", detections);
  const Scene scene = load_scene(buildings);
  std::map<std::string, floors::DetectionSet> by_image;
  for (auto& d : floors::read_detections_jsonl(detections)) {
    const std::string id = d.image_id;
    if (!by_image.emplace(id, std::move(d)).second) {
      throw InputError("duplicate detection set for image " + id);
    }
  }
  const auto assigned = svi::read_assignments_csv(assignments);
  const auto result = floors::make_pseudo_labels(assigned, by_image, scene.footprints, config);
  floors::write_pseudo_labels_csv(out_dir / "pseudo_labels.csv", result.labels);
  rec.output(out_dir / "pseudo_labels.csv");
  rec.report = result.report.to_json();
  rec.seconds = clock.seconds();
  return rec;
}

namespace {

std::vector<ssl::HeightLabel> pseudo_as_heights(const fs::path& path) {
  std::vector<ssl::HeightLabel> out;
  if (path.empty()) return out;
  for (const auto& p : floors::read_pseudo_labels_csv(path)) out.push_back({p.building_id, p.height});
  return out;
}

std::vector<ssl::HeightLabel> raw_heights(const fs::path& path) {
  if (path.empty()) return {};
  return ssl::read_height_labels_csv(path);
}

ssl::Matrix as_matrix(const morphometry::FeatureMatrix& f) {
  return ssl::Matrix(f.rows(), f.cols(), f.values());
}

}  // namespace

StageRecord stage_train(const fs::path& features, const fs::path& manifest,
                        const fs::path& raw_labels, const fs::path& pseudo_labels,
                        const RegressionConfig& config, std::uint64_t seed,
                        const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "train";
  rec.input("features", features);
  rec.input("manifest", manifest);
  rec.input("raw_labels", raw_labels);
  rec.input("pseudo_labels", pseudo_labels);
  const auto matrix = morphometry::FeatureMatrix::read(features, manifest);
  const auto raw_list = raw_heights(raw_labels);
  const auto pseudo_list = pseudo_as_heights(pseudo_labels);
  std::vector<std::string> missing_raw, missing_pseudo;
  const auto raw = ssl::make_dataset(matrix, raw_list, ssl::LabelSource::RAW, &missing_raw);
  const auto pseudo = ssl::make_dataset(matrix, pseudo_list, ssl::LabelSource::SVI, &missing_pseudo);
  if (raw.size() == 0 && pseudo.size() == 0) throw TrainingError("no labelled buildings to train on");

  ssl::TrainingMix mix{config.mix_a, Rng::derive(seed, 4).next()};
  if (raw.size() == 0) mix.a = 1.0;
  if (pseudo.size() == 0) mix.a = 0.0;
  const auto train_set = ssl::assemble_training_set(raw, pseudo, mix, config.training_size);

  ssl::ModelSpec spec = config.model;
  spec.seed = Rng::derive(seed, 5).next();
  const auto model = ssl::train(spec, train_set);
  const fs::path path =
      out_dir / (spec.kind == ssl::ModelKind::random_forest ? "model.ohrf" : "model.json");
  model.save(path);
  rec.output(path);
  rec.report = {{"model", path.filename().string()},
                {"spec", spec.to_json()},
                {"mix_a", mix.a},
                {"n_train", train_set.size()},
                {"n_raw", train_set.count(ssl::LabelSource::RAW)},
                {"n_pseudo", train_set.count(ssl::LabelSource::SVI)},
                {"raw_without_features", missing_raw.size()},
                {"pseudo_without_features", missing_pseudo.size()}};
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_experiment(const fs::path& features, const fs::path& manifest,
                             const fs::path& raw_labels, const fs::path& pseudo_labels,
                             const ssl::ExperimentConfig& config, const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "experiment";
  rec.input("features", features);
  rec.input("manifest", manifest);
  rec.input("raw_labels", raw_labels);
  rec.input("pseudo_labels", pseudo_labels);
  const auto matrix = morphometry::FeatureMatrix::read(features, manifest);
  const auto report =
      ssl::run_experiment(matrix, raw_heights(raw_labels), pseudo_as_heights(pseudo_labels), config);
  write_text_file(out_dir / "report.csv", report.to_csv());
  write_text_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  rec.output(out_dir / "report.csv");
  rec.output(out_dir / "report.json");
  rec.report = {{"rows", report.rows.size()}};
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_evaluate(const fs::path& model_path, const fs::path& features,
                           const fs::path& manifest, const fs::path& labels,
                           const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "evaluate";
  rec.input("model", model_path);
  rec.input("features", features);
  rec.input("manifest", manifest);
  rec.input("labels", labels);
  const auto model = ssl::TrainedModel::load(model_path);
  const auto matrix = morphometry::FeatureMatrix::read(features, manifest);
  std::vector<std::string> missing;
  const auto data =
      ssl::make_dataset(matrix, ssl::read_height_labels_csv(labels), ssl::LabelSource::RAW, &missing);
  const auto pred = model.predict(data.X, data.manifest_hash);
  const auto m = ssl::evaluate(pred, data.y);
  const json metrics = {{"mae", m.mae},
                        {"rmse", m.rmse},
                        {"r2", m.r2},
                        {"n", data.size()},
                        {"labels_without_features", missing.size()}};
  write_text_file(out_dir / "metrics.json", metrics.dump(2) + "\n");
  rec.output(out_dir / "metrics.json");
  rec.report = metrics;
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_predict(const fs::path& model_path, const fs::path& features,
                          const fs::path& manifest, const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "predict";
  rec.input("model", model_path);
  rec.input("features", features);
  rec.input("manifest", manifest);
  const auto model = ssl::TrainedModel::load(model_path);
  const auto matrix = morphometry::FeatureMatrix::read(features, manifest);
  const auto pred = model.predict(as_matrix(matrix), matrix.manifest_hash());
  std::vector<ssl::HeightLabel> out;
  out.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) out.push_back({matrix.building_ids()[i], pred[i]});
  ssl::write_height_labels_csv(out_dir / "predictions.csv", out);
  rec.output(out_dir / "predictions.csv");
  rec.report = {{"predicted", out.size()}};
  rec.seconds = clock.seconds();
  return rec;
}

StageRecord stage_build_lod1(const fs::path& buildings, const fs::path& heights,
                             const lod1::Lod1Config& config, ExportFormat format,
                             const fs::path& out_dir) {
  Stopwatch clock;
  StageRecord rec;
  rec.stage = "build_lod1";
  rec.input("buildings", buildings);
  rec.input("heights", heights);
  const Scene scene = load_scene(buildings);
  std::map<std::string, double> by_id;
  for (const auto& l : ssl::read_height_labels_csv(heights)) by_id[l.building_id] = l.height;
  auto build = lod1::build_city_model(scene.footprints, by_id, config, scene.projection.origin());
  if (build.model.empty()) throw InputError("no building has a usable height");
  if (format != ExportFormat::obj) {
    lod1::export_cityjson(build.model, out_dir / "city.json", config.quantization_m);
    rec.output(out_dir / "city.json");
  }
  if (format != ExportFormat::cityjson) {
    lod1::export_obj(build.model, out_dir / "city.obj");
    rec.output(out_dir / "city.obj");
  }
  rec.report = build.report.to_json();
  rec.seconds = clock.seconds();
  return rec;
}

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  const auto& p = config.paths;
  const fs::path out = p.out_dir;
  fs::create_directories(out);
  write_text_file(out / "config.json", config.to_json().dump(2) + "\n");

  RunManifest manifest(config.hash(), config.seed);
  manifest.add(stage_features(p.buildings, p.streets, config.morphometry, out));
  fs::path pseudo;
  if (!p.cameras.empty()) {
    manifest.add(stage_align(p.buildings, p.cameras, config.svi, p.allowlist, out));
    manifest.add(stage_floors(p.buildings, out / "assignments.csv", p.detections, config.floors, out));
    pseudo = out / "pseudo_labels.csv";
  }
  const auto train = stage_train(out / "features.csv", out / "manifest.json", p.raw_labels, pseudo,
                                 config.regression, config.seed, out);
  const fs::path model = out / train.report["model"].get<std::string>();
  manifest.add(train);
  manifest.add(stage_predict(model, out / "features.csv", out / "manifest.json", out));
  manifest.add(stage_build_lod1(p.buildings, out / "predictions.csv", config.lod1, config.format, out));
  manifest.write(out / "run_manifest.json");
  return manifest;
}

}  // namespace osmheight::pipeline
