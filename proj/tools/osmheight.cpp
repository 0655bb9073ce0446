// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

// osmheight: building heights from footprints, streets and street-level
// imagery, exported as an LoD1 city model.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "osmheight/errors.hpp"
#include "osmheight/hash.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/pipeline/config.hpp"
#include "osmheight/pipeline/io.hpp"
#include "osmheight/pipeline/stages.hpp"
#include "osmheight/pipeline/synthetic_city.hpp"
#include "osmheight/random.hpp"

namespace fs = std::filesystem;
namespace op = osmheight::pipeline;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitContract = 3;
constexpr int kExitInternal = 4;

// Writes `<stage>_run.json` next to the stage outputs.
void write_stage_manifest(const op::StageRecord& rec, const json& options, std::uint64_t seed,
                          const fs::path& out) {
  op::RunManifest m(osmheight::sha256_hex(options.dump()), seed);
  m.add(rec);
  m.write(out / (rec.stage + "_run.json"));
  std::cout << rec.report.dump(2) << "\n";
}

std::string path_arg(const fs::path& p) { return p.generic_string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Building height estimation and LoD1 export", "osmheight"};
  app.require_subcommand(1);
  app.set_version_flag("--version", op::version());

  fs::path out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory")->envname("OSMH_OUT");
    sub->add_option("--seed", seed, "Random seed")->envname("OSMH_SEED");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->envname("OSMH_THREADS");
  };

  fs::path buildings, streets, cameras, detections, allowlist, assignments, config_path;
  fs::path features, manifest, raw_labels, pseudo_labels, model, labels, heights;

  auto* features_cmd = app.add_subcommand("features", "Compute the morphometric feature matrix");
  features_cmd->add_option("--buildings", buildings, "Building footprints (GeoJSON)")->required();
  features_cmd->add_option("--streets", streets, "Street centrelines (GeoJSON)")->required();
  features_cmd->add_option("--config", config_path, "Morphometry config (JSON)")
      ->envname("OSMH_CONFIG");
  add_common(features_cmd);

  double max_range = 100.0;
  auto* align_cmd = app.add_subcommand("align", "Assign street-level images to buildings");
  align_cmd->add_option("--buildings", buildings, "Building footprints (GeoJSON)")->required();
  align_cmd->add_option("--cameras", cameras, "Image metadata (JSON lines)")->required();
  align_cmd->add_option("--allowlist", allowlist, "Image ids to keep, one per line");
  align_cmd->add_option("--max-range-m", max_range, "Ray length in metres")
      ->check(CLI::PositiveNumber);
  add_common(align_cmd);

  auto* floors_cmd = app.add_subcommand("floors", "Floor counts and pseudo-labels from detections");
  floors_cmd->add_option("--buildings", buildings, "Building footprints (GeoJSON)")->required();
  floors_cmd->add_option("--assignments", assignments, "assignments.csv from align")->required();
  floors_cmd->add_option("--detections", detections, "Detection sets (JSON lines)")->required();
  floors_cmd->add_option("--config", config_path, "Floors config (JSON)")->envname("OSMH_CONFIG");
  add_common(floors_cmd);

  std::string model_kind = "random_forest";
  fs::path model_spec_path;
  double mix_a = 0.5;
  auto* train_cmd = app.add_subcommand(
      "train", "Fit a height model, or run a model comparison with --config");
  train_cmd->add_option("--features", features, "features.csv")->required();
  train_cmd->add_option("--manifest", manifest, "manifest.json next to the features")->required();
  train_cmd->add_option("--raw-labels", raw_labels, "Reference heights (CSV)");
  train_cmd->add_option("--pseudo-labels", pseudo_labels, "pseudo_labels.csv from floors");
  train_cmd->add_option("--config", config_path, "Experiment config (JSON)")
      ->envname("OSMH_CONFIG");
  train_cmd->add_option("--model", model_kind,
                        "linear_gd | random_forest | kernel_rbf | dense_net");
  train_cmd->add_option("--model-spec", model_spec_path, "Model spec with hyperparameters (JSON)");
  train_cmd->add_option("--mix-a", mix_a, "Fraction of pseudo-labelled rows")
      ->check(CLI::Range(0.0, 1.0));
  add_common(train_cmd);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "MAE, RMSE and R2 of a saved model");
  evaluate_cmd->add_option("--model", model, "Saved model (model.ohrf or model.json)")->required();
  evaluate_cmd->add_option("--features", features, "features.csv")->required();
  evaluate_cmd->add_option("--manifest", manifest, "manifest.json next to the features")->required();
  evaluate_cmd->add_option("--labels", labels, "Reference heights (CSV)")->required();
  add_common(evaluate_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Predict heights for every building");
  predict_cmd->add_option("--model", model, "Saved model (model.ohrf or model.json)")->required();
  predict_cmd->add_option("--features", features, "features.csv")->required();
  predict_cmd->add_option("--manifest", manifest, "manifest.json next to the features")->required();
  add_common(predict_cmd);

  std::string format = "cityjson";
  osmheight::lod1::Lod1Config lod1_config;
  auto* lod1_cmd = app.add_subcommand("build-lod1", "Extrude footprints into an LoD1 model");
  lod1_cmd->add_option("--buildings", buildings, "Building footprints (GeoJSON)")->required();
  lod1_cmd->add_option("--heights", heights, "CSV with building_id,height_m")->required();
  lod1_cmd->add_option("--format", format, "cityjson | obj | both")
      ->check(CLI::IsMember({"cityjson", "obj", "both"}));
  lod1_cmd->add_option("--min-height-m", lod1_config.min_height_m, "Minimum extrusion height");
  lod1_cmd->add_option("--quantization-m", lod1_config.quantization_m,
                       "CityJSON coordinate resolution")
      ->check(CLI::PositiveNumber);
  add_common(lod1_cmd);

  bool print_config = false;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage from one config");
  pipeline_cmd->add_option("--config", config_path, "Pipeline config (JSON)")
      ->envname("OSMH_CONFIG");
  pipeline_cmd->add_flag("--print-config", print_config, "Print the default config and exit");
  pipeline_cmd->add_option("--out", out, "Override paths.out_dir")->envname("OSMH_OUT");
  std::optional<std::uint64_t> pipeline_seed;
  pipeline_cmd->add_option("--seed", pipeline_seed, "Override seed")->envname("OSMH_SEED");
  std::optional<unsigned> pipeline_threads;
  pipeline_cmd->add_option("--threads", pipeline_threads, "Worker threads")
      ->envname("OSMH_THREADS");

  double raw_fraction = 0.3;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic city");
  synth_cmd->add_option("--config", config_path, "Synthetic city spec (JSON)")
      ->envname("OSMH_CONFIG");
  synth_cmd->add_flag("--print-config", print_config, "Print the default spec and exit");
  synth_cmd->add_option("--raw-fraction", raw_fraction,
                        "Share of buildings written to raw_labels.csv")
      ->check(CLI::Range(0.0, 1.0));
  add_common(synth_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*features_cmd) {
      auto cfg = config_path.empty()
                     ? osmheight::morphometry::MorphometryConfig{}
                     : osmheight::morphometry::MorphometryConfig::from_json(
                           osmheight::read_json_file(config_path));
      if (threads) cfg.threads = threads;
      fs::create_directories(out);
      const auto rec = op::stage_features(buildings, streets, cfg, out);
      write_stage_manifest(rec, cfg.to_json(), seed, out);
    } else if (*align_cmd) {
      fs::create_directories(out);
      op::SviSettings s{max_range};
      const auto rec = op::stage_align(buildings, cameras, s, allowlist, out);
      write_stage_manifest(rec, {{"max_range_m", max_range}, {"allowlist", path_arg(allowlist)}},
                           seed, out);
    } else if (*floors_cmd) {
      const auto cfg = config_path.empty()
                           ? osmheight::floors::FloorConfig{}
                           : op::floor_config_from_json(osmheight::read_json_file(config_path));
      fs::create_directories(out);
      const auto rec = op::stage_floors(buildings, assignments, detections, cfg, out);
      write_stage_manifest(rec, op::floor_config_to_json(cfg), seed, out);
    } else if (*train_cmd) {
      fs::create_directories(out);
      if (!config_path.empty()) {
        const json j = osmheight::read_json_file(config_path);
        auto cfg = osmheight::ssl::ExperimentConfig::from_json(j);
        if (threads) {
          for (auto& k : cfg.kinds) k.forest.threads = threads;
        }
        const auto rec =
            op::stage_experiment(features, manifest, raw_labels, pseudo_labels, cfg, out);
        write_stage_manifest(rec, cfg.to_json(), seed, out);
      } else {
        op::RegressionConfig cfg;
        cfg.model = model_spec_path.empty()
                        ? osmheight::ssl::ModelSpec::from_json(json(model_kind))
                        : osmheight::ssl::ModelSpec::from_json(
                              osmheight::read_json_file(model_spec_path));
        if (threads) cfg.model.forest.threads = threads;
        cfg.mix_a = mix_a;
        const auto rec =
            op::stage_train(features, manifest, raw_labels, pseudo_labels, cfg, seed, out);
        write_stage_manifest(rec, {{"model", cfg.model.to_json()}, {"mix_a", mix_a}}, seed, out);
      }
    } else if (*evaluate_cmd) {
      fs::create_directories(out);
      const auto rec = op::stage_evaluate(model, features, manifest, labels, out);
      write_stage_manifest(rec, json::object(), seed, out);
    } else if (*predict_cmd) {
      fs::create_directories(out);
      const auto rec = op::stage_predict(model, features, manifest, out);
      write_stage_manifest(rec, json::object(), seed, out);
    } else if (*lod1_cmd) {
      fs::create_directories(out);
      const auto rec = op::stage_build_lod1(buildings, heights, lod1_config,
                                            op::export_format_from_string(format), out);
      json options = lod1_config.to_json();
      options["format"] = format;
      write_stage_manifest(rec, options, seed, out);
    } else if (*pipeline_cmd) {
      if (print_config) {
        std::cout << op::PipelineConfig{}.to_json().dump(2) << "\n";
        return 0;
      }
      if (config_path.empty()) throw osmheight::InputError("pipeline needs --config");
      auto cfg = op::PipelineConfig::load(config_path);
      if (pipeline_cmd->count("--out") || std::getenv("OSMH_OUT")) cfg.paths.out_dir = out;
      if (pipeline_seed) cfg.seed = *pipeline_seed;
      if (pipeline_threads) {
        cfg.morphometry.threads = *pipeline_threads;
        cfg.regression.model.forest.threads = *pipeline_threads;
      }
      const auto m = op::run_pipeline(cfg);
      std::cout << m.to_json().dump(2) << "\n";
    } else if (*synth_cmd) {
      if (print_config) {
        std::cout << op::SyntheticCitySpec{}.to_json().dump(2) << "\n";
        return 0;
      }
      auto spec = config_path.empty()
                      ? op::SyntheticCitySpec{}
                      : op::SyntheticCitySpec::from_json(osmheight::read_json_file(config_path));
      if (synth_cmd->count("--seed") || std::getenv("OSMH_SEED")) spec.seed = seed;
      const auto city = op::generate_synthetic_city(spec);
      city.write(out);

      auto truth = city.truth_labels();
      osmheight::Rng rng = osmheight::Rng::derive(spec.seed, 6);
      const auto pick = rng.sample(
          truth.size(), static_cast<std::size_t>(raw_fraction * static_cast<double>(truth.size())));
      std::vector<osmheight::ssl::HeightLabel> raw;
      for (std::size_t i : pick) raw.push_back(truth[i]);
      osmheight::ssl::write_height_labels_csv(out / "raw_labels.csv", raw);

      op::PipelineConfig pc;
      pc.paths.buildings = "buildings.geojson";
      pc.paths.streets = "streets.geojson";
      pc.paths.cameras = "cameras.jsonl";
      pc.paths.detections = "detections.jsonl";
      pc.paths.raw_labels = "raw_labels.csv";
      pc.paths.out_dir = "run";
      pc.seed = spec.seed;
      pc.regression.model.forest.n_trees = 100;
      osmheight::write_text_file(out / "pipeline.json", pc.to_json().dump(2) + "\n");
      osmheight::write_text_file(out / "spec.json", spec.to_json().dump(2) + "\n");
      std::cout << json{{"buildings", city.truth.size()},
                        {"blocks", city.block_count},
                        {"cameras", city.cameras.size()},
                        {"raw_labels", raw.size()}}
                       .dump(2)
                << "\n";
    }
  } catch (const osmheight::ParseError& e) {
    std::cerr << "input error (" << e.field() << "): " << e.what() << "\n";
    return kExitInput;
  } catch (const osmheight::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const osmheight::ContractError& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
