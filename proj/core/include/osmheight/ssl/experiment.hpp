// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/morphometry/manifest.hpp"
#include "osmheight/ssl/dataset.hpp"
#include "osmheight/ssl/metrics.hpp"
#include "osmheight/ssl/model.hpp"

namespace osmheight::ssl {

enum class TrainingSetKind { SVI, RAW, SSL };
std::string to_string(TrainingSetKind s);

enum class Protocol {
  holdout,  // fixed validation buildings drawn from the RAW labels
  split,    // shuffled split of each training set
};

enum class FeatureSubset { all, building };
std::string to_string(FeatureSubset s);

struct ExperimentConfig {
  std::vector<ModelSpec> kinds;
  std::vector<TrainingSetKind> sets{TrainingSetKind::RAW, TrainingSetKind::SVI,
                                    TrainingSetKind::SSL};
  std::vector<FeatureSubset> feature_subsets{FeatureSubset::all};
  double mix_a = 0.5;
  std::vector<std::uint64_t> seeds{0};
  double split_ratio = 0.7;
  Protocol protocol = Protocol::holdout;
  std::optional<std::vector<std::string>> validation_ids;
  std::size_t validation_size = 2000;
  std::optional<std::size_t> raw_budget;  // RAW rows available for training
  std::optional<std::size_t> svi_budget;  // pseudo-labelled rows, drawn from buildings outside the RAW budget

  nlohmann::json to_json() const;
  /// Unknown keys throw InputError. An empty `kinds` list defaults to a
  /// random forest.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentRow {
  std::uint64_t seed = 0;
  std::string features;
  std::string kind;
  std::string set;
  double mae = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::string solver;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  nlohmann::json config;

  std::string to_csv() const;
  /// {config, rows, summary}; summary holds per-(features, kind, set)
  /// medians over seeds.
  nlohmann::json to_json() const;
};

/// Trains every configured kind on every training-set variant, for each
/// seed and feature subset, and scores it on the validation buildings.
/// `raw_labels` are reference heights, `pseudo_labels` the SVI-derived ones.
ExperimentReport run_experiment(const morphometry::FeatureMatrix& features,
                                std::span<const HeightLabel> raw_labels,
                                std::span<const HeightLabel> pseudo_labels,
                                const ExperimentConfig& config);

/// CSV with header `building_id,height_m` (extra columns ignored).
std::vector<HeightLabel> read_height_labels_csv(const std::filesystem::path& path);
void write_height_labels_csv(const std::filesystem::path& path, std::span<const HeightLabel> labels);

}  // namespace osmheight::ssl
