// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/ssl/dataset.hpp"
#include "osmheight/ssl/matrix.hpp"
#include "osmheight/ssl/standardizer.hpp"

namespace osmheight::ssl {

enum class ModelKind { linear_gd, random_forest, kernel_rbf, dense_net };
std::string to_string(ModelKind k);
ModelKind model_kind_from_string(std::string_view s);

enum class Loss { mse, mae };

struct LinearParams {
  double learning_rate = 0.1;
  int epochs = 5000;
  Loss loss = Loss::mse;
};

struct ForestParams {
  int n_trees = 1000;
  int max_depth = 0;     // 0 = grow until leaves are pure or minimal
  int min_leaf = 1;
  int max_features = 0;  // 0 = max(1, m / 3)
  bool bootstrap = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

enum class KernelSolver { kernel_ridge_closed_form, svr_smo };

struct KernelParams {
  double gamma = 0.0;  // 0 = 1 / m
  double lambda = 0.1;
  KernelSolver solver = KernelSolver::kernel_ridge_closed_form;
  double epsilon = 0.1;  // in units of the centred target
  double C = 10.0;
  double tolerance = 1e-3;
  long max_iterations = 10'000'000;
};

struct DenseParams {
  std::vector<int> layers{128, 64, 32};
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 100;
  int batch = 32;
};

/// Model kind plus the hyperparameters of every kind (only the matching
/// block is used) and the seed of any randomness in training.
struct ModelSpec {
  ModelKind kind = ModelKind::random_forest;
  LinearParams linear;
  ForestParams forest;
  KernelParams kernel;
  DenseParams dense;
  std::uint64_t seed = 0;

  std::string solver() const;
  nlohmann::json to_json() const;
  /// {"kind": ..., "hyperparameters": {...}, "seed": ...}; also accepts a
  /// bare kind string. Throws InputError on unknown keys or bad values.
  static ModelSpec from_json(const nlohmann::json& j);
};

/// Regressor over standardized feature rows.
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual double predict(std::span<const double> z) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

class TrainedModel {
 public:
  static constexpr double kMinHeight = 2.5;

  TrainedModel(ModelSpec spec, std::string manifest_hash, Standardizer standardizer,
               std::shared_ptr<const Regressor> regressor);

  const ModelSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind; }
  const std::string& manifest_hash() const { return manifest_hash_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const Regressor& regressor() const { return *regressor_; }

  /// Heights clipped below at kMinHeight. Throws ContractError when the
  /// manifest hash differs from the training features.
  std::vector<double> predict(const Matrix& X, std::string_view manifest_hash) const;
  double predict_row(std::span<const double> x) const;  // clipped, no hash check

  /// Forests are written as a binary dump, other kinds as JSON.
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

 private:
  ModelSpec spec_;
  std::string manifest_hash_;
  Standardizer standardizer_;
  std::shared_ptr<const Regressor> regressor_;
};

/// Standardizes features on the training rows and fits the configured kind.
/// Throws TrainingError for fewer than two rows or all-identical rows.
TrainedModel train(const ModelSpec& spec, const LabeledDataset& d);

}  // namespace osmheight::ssl
