// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/ssl/dense_net.hpp"
#include "osmheight/ssl/kernel_rbf.hpp"
#include "osmheight/ssl/linear_gd.hpp"
#include "osmheight/ssl/random_forest.hpp"

namespace osmheight::ssl {

using nlohmann::json;

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::linear_gd:
      return "linear_gd";
    case ModelKind::random_forest:
      return "random_forest";
    case ModelKind::kernel_rbf:
      return "kernel_rbf";
    case ModelKind::dense_net:
      return "dense_net";
  }
  return "random_forest";
}

ModelKind model_kind_from_string(std::string_view s) {
  for (auto k : {ModelKind::linear_gd, ModelKind::random_forest, ModelKind::kernel_rbf,
                 ModelKind::dense_net}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown model kind '" + std::string(s) + "'");
}

namespace {

constexpr char kForestMagic[4] = {'O', 'H', 'R', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

std::string solver_name(KernelSolver s) {
  return s == KernelSolver::svr_smo ? "svr_smo" : "kernel_ridge_closed_form";
}

json hyperparameters(const ModelSpec& s) {
  switch (s.kind) {
    case ModelKind::linear_gd:
      return {{"learning_rate", s.linear.learning_rate},
              {"epochs", s.linear.epochs},
              {"loss", s.linear.loss == Loss::mse ? "mse" : "mae"}};
    case ModelKind::random_forest:
      return {{"n_trees", s.forest.n_trees},
              {"max_depth", s.forest.max_depth},
              {"min_leaf", s.forest.min_leaf},
              {"max_features", s.forest.max_features},
              {"bootstrap", s.forest.bootstrap}};
    case ModelKind::kernel_rbf:
      return {{"gamma", s.kernel.gamma},
              {"lambda", s.kernel.lambda},
              {"solver", solver_name(s.kernel.solver)},
              {"epsilon", s.kernel.epsilon},
              {"C", s.kernel.C},
              {"tolerance", s.kernel.tolerance},
              {"max_iterations", s.kernel.max_iterations}};
    case ModelKind::dense_net:
      return {{"layers", s.dense.layers},
              {"learning_rate", s.dense.learning_rate},
              {"momentum", s.dense.momentum},
              {"epochs", s.dense.epochs},
              {"batch", s.dense.batch}};
  }
  return json::object();
}

template <typename T>
void read_key(const json& h, const char* key, T& out) {
  if (h.contains(key)) out = h[key].get<T>();
}

void apply_hyperparameters(ModelSpec& s, const json& h) {
  if (!h.is_object()) throw InputError("hyperparameters must be an object");
  std::set<std::string> allowed;
  const json defaults = hyperparameters(s);
  for (const auto& [k, v] : defaults.items()) allowed.insert(k);
  allowed.insert("threads");
  for (const auto& [k, v] : h.items()) {
    if (!allowed.contains(k)) {
      throw InputError("unknown " + to_string(s.kind) + " hyperparameter '" + k + "'");
    }
  }
  switch (s.kind) {
    case ModelKind::linear_gd: {
      read_key(h, "learning_rate", s.linear.learning_rate);
      read_key(h, "epochs", s.linear.epochs);
      std::string loss = s.linear.loss == Loss::mse ? "mse" : "mae";
      read_key(h, "loss", loss);
      if (loss != "mse" && loss != "mae") throw InputError("loss must be mse or mae");
      s.linear.loss = loss == "mse" ? Loss::mse : Loss::mae;
      if (!(s.linear.learning_rate > 0) || s.linear.epochs < 1) {
        throw InputError("linear_gd needs learning_rate > 0 and epochs >= 1");
      }
      break;
    }
    case ModelKind::random_forest:
      read_key(h, "n_trees", s.forest.n_trees);
      read_key(h, "max_depth", s.forest.max_depth);
      read_key(h, "min_leaf", s.forest.min_leaf);
      read_key(h, "max_features", s.forest.max_features);
      read_key(h, "bootstrap", s.forest.bootstrap);
      read_key(h, "threads", s.forest.threads);
      if (s.forest.n_trees < 1 || s.forest.min_leaf < 1 || s.forest.max_depth < 0 ||
          s.forest.max_features < 0) {
        throw InputError("random_forest needs n_trees >= 1, min_leaf >= 1, max_depth >= 0");
      }
      break;
    case ModelKind::kernel_rbf: {
      read_key(h, "gamma", s.kernel.gamma);
      read_key(h, "lambda", s.kernel.lambda);
      std::string solver = solver_name(s.kernel.solver);
      read_key(h, "solver", solver);
      if (solver == "kernel_ridge_closed_form") {
        s.kernel.solver = KernelSolver::kernel_ridge_closed_form;
      } else if (solver == "svr_smo") {
        s.kernel.solver = KernelSolver::svr_smo;
      } else {
        throw InputError("kernel solver must be kernel_ridge_closed_form or svr_smo");
      }
      read_key(h, "epsilon", s.kernel.epsilon);
      read_key(h, "C", s.kernel.C);
      read_key(h, "tolerance", s.kernel.tolerance);
      read_key(h, "max_iterations", s.kernel.max_iterations);
      if (s.kernel.gamma < 0 || !(s.kernel.lambda > 0) || !(s.kernel.C > 0) ||
          s.kernel.epsilon < 0 || !(s.kernel.tolerance > 0)) {
        throw InputError("kernel_rbf hyperparameters must be positive");
      }
      break;
    }
    case ModelKind::dense_net:
      read_key(h, "layers", s.dense.layers);
      read_key(h, "learning_rate", s.dense.learning_rate);
      read_key(h, "momentum", s.dense.momentum);
      read_key(h, "epochs", s.dense.epochs);
      read_key(h, "batch", s.dense.batch);
      if (s.dense.layers.empty() ||
          std::any_of(s.dense.layers.begin(), s.dense.layers.end(), [](int w) { return w < 1; }) ||
          !(s.dense.learning_rate > 0) || s.dense.epochs < 1 || s.dense.batch < 1 ||
          s.dense.momentum < 0 || s.dense.momentum >= 1) {
        throw InputError("dense_net hyperparameters out of range");
      }
      break;
  }
}

std::shared_ptr<const Regressor> regressor_from_json(ModelKind kind, const json& j) {
  switch (kind) {
    case ModelKind::linear_gd:
      return std::make_shared<LinearRegressor>(LinearRegressor::from_json(j));
    case ModelKind::kernel_rbf:
      return std::make_shared<KernelRegressor>(KernelRegressor::from_json(j));
    case ModelKind::dense_net:
      return std::make_shared<DenseRegressor>(DenseRegressor::from_json(j));
    case ModelKind::random_forest:
      break;
  }
  throw InputError("random_forest models are stored in the binary format");
}

json header_json(const ModelSpec& spec, const std::string& hash, const Standardizer& st) {
  return {{"format", "osmheight-model"},
          {"format_version", kFormatVersion},
          {"spec", spec.to_json()},
          {"manifest_hash", hash},
          {"standardizer", st.to_json()}};
}

}  // namespace

std::string ModelSpec::solver() const {
  switch (kind) {
    case ModelKind::linear_gd:
      return std::string("gradient_descent_") + (linear.loss == Loss::mse ? "mse" : "mae");
    case ModelKind::random_forest:
      return forest.bootstrap ? "cart_bootstrap" : "cart";
    case ModelKind::kernel_rbf:
      return solver_name(kernel.solver);
    case ModelKind::dense_net:
      return "sgd_momentum";
  }
  return "";
}

json ModelSpec::to_json() const {
  return {{"kind", to_string(kind)}, {"hyperparameters", hyperparameters(*this)}, {"seed", seed}};
}

ModelSpec ModelSpec::from_json(const json& j) {
  ModelSpec s;
  try {
    if (j.is_string()) {
      s.kind = model_kind_from_string(j.get<std::string>());
      return s;
    }
    if (!j.is_object() || !j.contains("kind")) throw InputError("model spec needs a kind");
    for (const auto& [k, v] : j.items()) {
      if (k != "kind" && k != "hyperparameters" && k != "seed") {
        throw InputError("unknown model spec key '" + k + "'");
      }
    }
    s.kind = model_kind_from_string(j["kind"].get<std::string>());
    if (j.contains("hyperparameters")) apply_hyperparameters(s, j["hyperparameters"]);
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad model spec: ") + e.what());
  }
  return s;
}

TrainedModel::TrainedModel(ModelSpec spec, std::string manifest_hash, Standardizer standardizer,
                           std::shared_ptr<const Regressor> regressor)
    : spec_(std::move(spec)),
      manifest_hash_(std::move(manifest_hash)),
      standardizer_(std::move(standardizer)),
      regressor_(std::move(regressor)) {}

double TrainedModel::predict_row(std::span<const double> x) const {
  const double h = regressor_->predict(standardizer_.transform_row(x));
  if (!std::isfinite(h)) throw EvaluationError("model produced a non-finite prediction");
  return std::max(kMinHeight, h);
}

std::vector<double> TrainedModel::predict(const Matrix& X, std::string_view manifest_hash) const {
  if (manifest_hash != manifest_hash_) {
    throw ContractError("feature manifest " + std::string(manifest_hash) +
                        " does not match the model's " + manifest_hash_);
  }
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
  return out;
}

json TrainedModel::to_json() const {
  if (spec_.kind == ModelKind::random_forest) {
    throw ContractError("random_forest models are stored in the binary format");
  }
  json j = header_json(spec_, manifest_hash_, standardizer_);
  j["regressor"] = regressor_->to_json();
  return j;
}

TrainedModel TrainedModel::from_json(const json& j) {
  try {
    if (j.value("format", "") != "osmheight-model") throw InputError("not an osmheight model file");
    if (j.at("format_version").get<std::uint32_t>() != kFormatVersion) {
      throw InputError("unsupported model format version");
    }
    ModelSpec spec = ModelSpec::from_json(j.at("spec"));
    auto reg = regressor_from_json(spec.kind, j.at("regressor"));
    return TrainedModel(spec, j.at("manifest_hash").get<std::string>(),
                        Standardizer::from_json(j.at("standardizer")), std::move(reg));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

void TrainedModel::save(const std::filesystem::path& path) const {
  if (spec_.kind != ModelKind::random_forest) {
    write_text_file(path, to_json().dump() + "\n");
    return;
  }
  std::ostringstream out(std::ios::binary);
  out.write(kForestMagic, sizeof kForestMagic);
  const std::string header = header_json(spec_, manifest_hash_, standardizer_).dump();
  const std::uint32_t version = kFormatVersion;
  const std::uint64_t len = header.size();
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  static_cast<const ForestRegressor&>(*regressor_).write(out);
  write_text_file(path, out.str());
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  if (bytes.size() < sizeof kForestMagic ||
      std::memcmp(bytes.data(), kForestMagic, sizeof kForestMagic) != 0) {
    json j;
    try {
      j = json::parse(bytes);
    } catch (const json::exception& e) {
      throw InputError(path.string() + ": not a model file (" + e.what() + ")");
    }
    return from_json(j);
  }
  std::istringstream in(bytes, std::ios::binary);
  in.ignore(sizeof kForestMagic);
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || version != kFormatVersion || len > bytes.size()) {
    throw InputError(path.string() + ": unsupported forest dump");
  }
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  json h;
  try {
    h = json::parse(header);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": corrupt forest header");
  }
  ModelSpec spec = ModelSpec::from_json(h.at("spec"));
  auto forest = std::make_shared<ForestRegressor>(ForestRegressor::read(in));
  return TrainedModel(spec, h.at("manifest_hash").get<std::string>(),
                      Standardizer::from_json(h.at("standardizer")), std::move(forest));
}

TrainedModel train(const ModelSpec& spec, const LabeledDataset& d) {
  d.validate();
  if (d.size() < 2) throw TrainingError("need at least two training rows");
  bool identical = true;
  for (std::size_t r = 1; r < d.size() && identical; ++r) {
    const auto a = d.X.row(0), b = d.X.row(r);
    identical = std::equal(a.begin(), a.end(), b.begin());
  }
  if (identical) throw TrainingError("all training rows are identical");

  Standardizer st = Standardizer::fit(d.X);
  const Matrix Z = st.transform(d.X);
  std::shared_ptr<const Regressor> reg;
  switch (spec.kind) {
    case ModelKind::linear_gd:
      reg = std::make_shared<LinearRegressor>(LinearRegressor::fit(Z, d.y, spec.linear));
      break;
    case ModelKind::random_forest:
      reg = std::make_shared<ForestRegressor>(ForestRegressor::fit(Z, d.y, spec.forest, spec.seed));
      break;
    case ModelKind::kernel_rbf:
      reg = spec.kernel.solver == KernelSolver::svr_smo
                ? std::make_shared<KernelRegressor>(KernelRegressor::fit_svr(Z, d.y, spec.kernel))
                : std::make_shared<KernelRegressor>(KernelRegressor::fit_ridge(Z, d.y, spec.kernel));
      break;
    case ModelKind::dense_net:
      reg = std::make_shared<DenseRegressor>(DenseRegressor::fit(Z, d.y, spec.dense, spec.seed));
      break;
  }
  return TrainedModel(spec, d.manifest_hash, std::move(st), std::move(reg));
}

}  // namespace osmheight::ssl
