// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/random.hpp"
#include "osmheight/ssl/dataset.hpp"
#include "osmheight/ssl/dense_net.hpp"
#include "osmheight/ssl/experiment.hpp"
#include "osmheight/ssl/kernel_rbf.hpp"
#include "osmheight/ssl/linear_gd.hpp"
#include "osmheight/ssl/metrics.hpp"
#include "osmheight/ssl/model.hpp"
#include "osmheight/ssl/random_forest.hpp"
#include "osmheight/ssl/standardizer.hpp"
#include "small_oracles.hpp"
#include "test_support.hpp"

namespace osmheight::ssl {
namespace {

using morphometry::FeatureEntry;
using morphometry::FeatureLevel;
using morphometry::FeatureManifest;
using morphometry::FeatureMatrix;

// n x m features; height = 20 + 2 f0 - f1 + noise.
LabeledDataset synthetic(std::size_t n, std::size_t m, std::uint64_t seed, double noise = 0.3) {
  Rng rng(seed);
  LabeledDataset d;
  d.X = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) d.X(i, j) = rng.uniform(-2, 2) * (j + 1);
    d.building_ids.push_back("b" + std::to_string(i));
    d.y.push_back(20.0 + 2.0 * d.X(i, 0) - d.X(i, 1) + rng.normal(0, noise));
    d.source.push_back(LabelSource::RAW);
  }
  d.manifest_hash = "h";
  return d;
}

ModelSpec spec_of(ModelKind kind) {
  ModelSpec s;
  s.kind = kind;
  s.forest.n_trees = 30;
  s.dense.epochs = 60;
  s.dense.layers = {16, 8, 4};
  return s;
}

FeatureMatrix feature_matrix(std::size_t n, std::uint64_t seed) {
  FeatureManifest man;
  man.entries.push_back({"area", FeatureLevel::building, "area", 0.0, morphometry::Aggregator::none, 2});
  man.entries.push_back({"elong", FeatureLevel::building, "elong", 0.0, morphometry::Aggregator::none, 0});
  man.entries.push_back({"str_len", FeatureLevel::street, "str_len", 0.0, morphometry::Aggregator::none, 1});
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("way/" + std::to_string(1000 + i));
  FeatureMatrix fm(ids, man);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    fm.at(i, 0) = rng.uniform(50, 400);
    fm.at(i, 1) = rng.uniform(1, 3);
    fm.at(i, 2) = rng.uniform(20, 200);
  }
  return fm;
}

std::vector<HeightLabel> labels_for(const FeatureMatrix& fm, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<HeightLabel> out;
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    out.push_back({fm.building_ids()[i],
                   std::max(2.5, 4.0 + 0.04 * fm.at(i, 0) + 2.0 * fm.at(i, 1) + rng.normal(0, noise))});
  }
  return out;
}

// --------------------------------------------------------------- metrics

TEST(Metrics, HandComputedValues) {
  const std::vector<double> truth{10, 20}, pred{12, 18};
  const auto m = evaluate(pred, truth);
  EXPECT_DOUBLE_EQ(m.mae, 2.0);
  EXPECT_DOUBLE_EQ(m.rmse, 2.0);
  EXPECT_NEAR(m.r2, 0.84, 1e-12);

  const std::vector<double> t2{1, 2, 3, 4}, p2{2, 2, 5, 3};
  const auto m2 = evaluate(p2, t2);
  EXPECT_NEAR(m2.mae, 1.0, 1e-12);
  EXPECT_NEAR(m2.rmse, std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(m2.r2, 1.0 - 6.0 / 5.0, 1e-12);
}

TEST(Metrics, PerfectAndMeanPredictions) {
  const std::vector<double> truth{3, 7, 11, 4};
  const auto perfect = evaluate(truth, truth);
  EXPECT_EQ(perfect.mae, 0.0);
  EXPECT_EQ(perfect.rmse, 0.0);
  EXPECT_EQ(perfect.r2, 1.0);
  const std::vector<double> mean(4, 6.25);
  EXPECT_NEAR(evaluate(mean, truth).r2, 0.0, 1e-15);
}

TEST(Metrics, RmseDominatesMaeOnRandomVectors) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.index(30);
    std::vector<double> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng.uniform(0, 40);
      p[i] = t[i] + rng.normal(0, rng.uniform(0.01, 10));
    }
    const auto m = evaluate(p, t);
    EXPECT_GE(m.rmse, m.mae - 1e-12);
    EXPECT_GE(m.mae, 0.0);
    EXPECT_LE(m.r2, 1.0);
  }
}

TEST(Metrics, RejectsDegenerateInput) {
  const std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(evaluate(a, b), EvaluationError);
  const std::vector<double> one{1};
  EXPECT_THROW(evaluate(one, one), EvaluationError);
  const std::vector<double> flat{5, 5, 5};
  EXPECT_THROW(evaluate(a, flat), EvaluationError);
}

// ----------------------------------------------------------- standardizer

TEST(Standardizer, TrainingColumnsBecomeUnitScale) {
  const auto d = synthetic(200, 4, 1);
  Matrix X = d.X;
  for (std::size_t i = 0; i < X.rows(); ++i) X(i, 3) = 42.0;  // constant column
  const auto s = Standardizer::fit(X);
  const Matrix Z = s.transform(X);
  for (std::size_t j = 0; j < X.cols(); ++j) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < Z.rows(); ++i) mean += Z(i, j);
    mean /= Z.rows();
    for (std::size_t i = 0; i < Z.rows(); ++i) var += (Z(i, j) - mean) * (Z(i, j) - mean);
    var /= Z.rows();
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var), j == 3 ? 0.0 : 1.0, 1e-9);
  }
  EXPECT_EQ(s.scale[3], 0.0);
  const auto back = Standardizer::from_json(s.to_json());
  EXPECT_EQ(back.mean, s.mean);
  EXPECT_EQ(back.scale, s.scale);
}

// --------------------------------------------------------------- dataset

TEST(Dataset, ValidateCatchesInconsistency) {
  auto d = synthetic(12, 2, 2);
  EXPECT_NO_THROW(d.validate());
  d.y[3] = 0.0;
  EXPECT_THROW(d.validate(), ContractError);
  d = synthetic(12, 2, 2);
  d.source.pop_back();
  EXPECT_THROW(d.validate(), ContractError);
}

TEST(Dataset, MakeDatasetFollowsLabelOrderAndReportsMissing) {
  const auto fm = feature_matrix(5, 1);
  const std::vector<HeightLabel> labels{{"way/1003", 9.0}, {"way/77", 3.0}, {"way/1000", 6.0}};
  std::vector<std::string> missing;
  const auto d = make_dataset(fm, labels, LabelSource::SVI, &missing);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.building_ids, (std::vector<std::string>{"way/1003", "way/1000"}));
  EXPECT_EQ(d.X(0, 0), fm.at(3, 0));
  EXPECT_EQ(d.count(LabelSource::SVI), 2u);
  EXPECT_EQ(d.manifest_hash, fm.manifest_hash());
  EXPECT_EQ(missing, (std::vector<std::string>{"way/77"}));
}

TEST(Dataset, SelectLevelHasItsOwnManifest) {
  const auto fm = feature_matrix(4, 2);
  const auto b = select_level(fm, FeatureLevel::building);
  EXPECT_EQ(b.cols(), 2u);
  EXPECT_EQ(b.rows(), 4u);
  EXPECT_NE(b.manifest_hash(), fm.manifest_hash());
  EXPECT_EQ(b.at(2, 1), fm.at(2, 1));
}

LabeledDataset tagged(std::size_t n, LabelSource s, const std::string& prefix) {
  auto d = synthetic(n, 2, n);
  for (std::size_t i = 0; i < n; ++i) {
    d.source[i] = s;
    d.building_ids[i] = prefix + std::to_string(i);
  }
  return d;
}

TEST(Mix, EndpointsAndPaperSizedHalfMix) {
  const auto raw = tagged(308, LabelSource::RAW, "r");
  const auto svi = tagged(308, LabelSource::SVI, "s");
  const auto only_raw = assemble_training_set(raw, svi, {0.0, 1});
  EXPECT_EQ(only_raw.count(LabelSource::SVI), 0u);
  EXPECT_EQ(only_raw.size(), 308u);
  const auto only_svi = assemble_training_set(raw, svi, {1.0, 1});
  EXPECT_EQ(only_svi.count(LabelSource::RAW), 0u);
  EXPECT_EQ(only_svi.size(), 308u);

  const auto both = assemble_training_set(raw, svi, {0.5, 1}, 616);
  EXPECT_EQ(both.size(), 616u);
  EXPECT_EQ(both.count(LabelSource::RAW), 308u);
  const std::set<std::string> ids(both.building_ids.begin(), both.building_ids.end());
  EXPECT_EQ(ids.size(), 616u);
}

TEST(Mix, CountsRoundAndSamplingIsSeeded) {
  const auto raw = tagged(100, LabelSource::RAW, "r");
  const auto svi = tagged(100, LabelSource::SVI, "s");
  const auto d = assemble_training_set(raw, svi, {0.3, 5}, 50);
  EXPECT_EQ(d.count(LabelSource::RAW), 35u);
  EXPECT_EQ(d.count(LabelSource::SVI), 15u);
  EXPECT_EQ(assemble_training_set(raw, svi, {0.3, 5}, 50).building_ids, d.building_ids);
  EXPECT_NE(assemble_training_set(raw, svi, {0.3, 6}, 50).building_ids, d.building_ids);
}

TEST(Mix, OverlapKeepsRawAndShortfallThrows) {
  const auto raw = tagged(10, LabelSource::RAW, "x");
  const auto svi = tagged(10, LabelSource::SVI, "x");  // same ids
  const auto d = assemble_training_set(raw, svi, {0.0, 1});
  EXPECT_EQ(d.size(), 10u);
  EXPECT_THROW(assemble_training_set(raw, svi, {0.5, 1}, 4), AvailabilityError);
  try {
    assemble_training_set(raw, tagged(3, LabelSource::SVI, "s"), {0.5, 1}, 20);
    FAIL();
  } catch (const AvailabilityError& e) {
    EXPECT_NE(std::string(e.what()).find("SVI"), std::string::npos) << e.what();
  }
  auto other = tagged(10, LabelSource::SVI, "s");
  other.manifest_hash = "different";
  EXPECT_THROW(assemble_training_set(raw, other, {0.5, 1}), ContractError);
}

TEST(Split, SizesDisjointnessAndDeterminism) {
  const auto d = synthetic(10, 2, 4);
  const auto [train_set, test_set] = split(d, 0.7, 9);
  EXPECT_EQ(train_set.size(), 7u);
  EXPECT_EQ(test_set.size(), 3u);
  std::multiset<std::string> all(train_set.building_ids.begin(), train_set.building_ids.end());
  all.insert(test_set.building_ids.begin(), test_set.building_ids.end());
  EXPECT_EQ(all, std::multiset<std::string>(d.building_ids.begin(), d.building_ids.end()));
  EXPECT_EQ(split(d, 0.7, 9).first.building_ids, train_set.building_ids);
  EXPECT_THROW(split(synthetic(9, 2, 4), 0.7, 9), ContractError);
}

// ---------------------------------------------------------------- models

TEST(Train, LinearRecoversLeastSquares) {
  const auto d = synthetic(150, 3, 5);
  ModelSpec s = spec_of(ModelKind::linear_gd);
  const auto model = train(s, d);
  const auto [w, b] = linear_coefficients(model);
  const auto want = oracle::ols(d.X.data(), d.size(), 3, d.y);
  EXPECT_NEAR(b, want[0], 1e-3);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(w[j], want[j + 1], 1e-3);
  const auto& trace = dynamic_cast<const LinearRegressor&>(model.regressor()).loss_trace();
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
}

TEST(Train, MaeLossTraceIsMonotone) {
  ModelSpec s = spec_of(ModelKind::linear_gd);
  s.linear.loss = Loss::mae;
  s.linear.epochs = 500;
  const auto model = train(s, synthetic(80, 2, 6, 2.0));
  const auto& trace = dynamic_cast<const LinearRegressor&>(model.regressor()).loss_trace();
  ASSERT_EQ(trace.size(), 501u);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
  EXPECT_LT(trace.back(), trace.front());
}

TEST(Train, ConstantTargetIsReproducedByEveryKind) {
  auto d = synthetic(40, 3, 7);
  std::fill(d.y.begin(), d.y.end(), 7.0);
  for (auto kind : {ModelKind::linear_gd, ModelKind::random_forest, ModelKind::kernel_rbf,
                    ModelKind::dense_net}) {
    const auto model = train(spec_of(kind), d);
    for (double p : model.predict(d.X, d.manifest_hash)) EXPECT_NEAR(p, 7.0, 1e-6) << to_string(kind);
  }
}

TEST(Train, DegenerateDatasetsThrow) {
  auto d = synthetic(1, 2, 8);
  EXPECT_THROW(train(spec_of(ModelKind::linear_gd), d), TrainingError);
  d = synthetic(6, 2, 8);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.X(i, 0) = 1.0;
    d.X(i, 1) = 2.0;
  }
  EXPECT_THROW(train(spec_of(ModelKind::random_forest), d), TrainingError);
}

TEST(Train, EveryKindBeatsTheMeanOnHeldOutRows) {
  const auto d = synthetic(300, 3, 9);
  const auto [tr, te] = split(d, 0.7, 1);
  for (auto kind : {ModelKind::linear_gd, ModelKind::random_forest, ModelKind::kernel_rbf,
                    ModelKind::dense_net}) {
    const auto model = train(spec_of(kind), tr);
    const auto m = evaluate(model.predict(te.X, te.manifest_hash), te.y);
    EXPECT_GT(m.r2, 0.8) << to_string(kind);
  }
  ModelSpec svr = spec_of(ModelKind::kernel_rbf);
  svr.kernel.solver = KernelSolver::svr_smo;
  const auto model = train(svr, tr);
  EXPECT_GT(evaluate(model.predict(te.X, te.manifest_hash), te.y).r2, 0.8);
  EXPECT_EQ(svr.solver(), "svr_smo");
}

TEST(Predict, ClipsAndChecksManifest) {
  auto d = synthetic(50, 2, 10);
  for (std::size_t i = 0; i < d.size(); ++i) d.y[i] = 3.0 + d.X(i, 0);
  for (double& y : d.y) y = std::max(y, 0.5);
  // Far below the training range the fit goes under one floor.
  const auto model = train(spec_of(ModelKind::linear_gd), d);
  const std::vector<double> low{-100.0, 0.0};
  EXPECT_EQ(model.predict_row(low), TrainedModel::kMinHeight);
  EXPECT_THROW(model.predict(d.X, "other"), ContractError);
}

TEST(Predict, ZeroWeightLinearModelIsItsBias) {
  Standardizer st{{0.0, 0.0}, {1.0, 1.0}};
  const TrainedModel model(spec_of(ModelKind::linear_gd), "h", st,
                           std::make_shared<LinearRegressor>(std::vector<double>{0.0, 0.0}, 10.0));
  const auto d = synthetic(20, 2, 11);
  for (double p : model.predict(d.X, "h")) EXPECT_EQ(p, 10.0);
}

TEST(Forest, IdenticalTreesPredictLikeOne) {
  const auto d = synthetic(30, 2, 12);
  const Standardizer st = Standardizer::fit(d.X);
  const Matrix Z = st.transform(d.X);
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  ForestParams p;
  p.max_features = 2;
  Rng rng(1);
  const auto tree = fit_tree(Z, d.y, rows, p, rng);
  const ForestRegressor forest({tree, tree, tree});
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(forest.predict(Z.row(i)), tree.predict(Z.row(i)));
}

double split_sse(const Matrix& Z, const std::vector<double>& y, std::size_t f, double t) {
  double sl = 0, sr = 0, nl = 0, nr = 0;
  for (std::size_t i = 0; i < Z.rows(); ++i) {
    if (Z(i, f) <= t) {
      sl += y[i], nl += 1;
    } else {
      sr += y[i], nr += 1;
    }
  }
  double sse = 0;
  for (std::size_t i = 0; i < Z.rows(); ++i) {
    const double mu = Z(i, f) <= t ? sl / nl : sr / nr;
    sse += (y[i] - mu) * (y[i] - mu);
  }
  return sse;
}

// Lowest squared error over every (feature, midpoint) split.
double brute_best_sse(const Matrix& Z, const std::vector<double>& y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < Z.cols(); ++f) {
    std::vector<double> v;
    for (std::size_t i = 0; i < Z.rows(); ++i) v.push_back(Z(i, f));
    std::sort(v.begin(), v.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      if (v[k] != v[k + 1]) best = std::min(best, split_sse(Z, y, f, 0.5 * (v[k] + v[k + 1])));
    }
  }
  return best;
}

// Different features can induce the same partition, so the split is
// compared by its error rather than by feature index.
TEST(Forest, RootSplitMatchesExhaustiveSearch) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix Z(4, 3);
    std::vector<double> y(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) Z(i, j) = rng.uniform(-1, 1);
      y[i] = rng.uniform(0, 10);
    }
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    p.max_features = 3;
    const auto forest = ForestRegressor::fit(Z, y, p, trial);
    const auto& root = forest.trees()[0].nodes[0];
    ASSERT_GE(root.feature, 0);
    EXPECT_NEAR(split_sse(Z, y, static_cast<std::size_t>(root.feature), root.threshold),
                brute_best_sse(Z, y), 1e-9);
  }
}

TEST(Forest, MoreTreesMeanLessSeedVariance) {
  const auto d = synthetic(120, 4, 14, 2.0);
  const Standardizer st = Standardizer::fit(d.X);
  const Matrix Z = st.transform(d.X);
  const std::vector<double> probe{0.3, -0.2, 0.1, 0.0};
  const auto seed_variance = [&](int trees) {
    ForestParams p;
    p.n_trees = trees;
    std::vector<double> preds;
    for (std::uint64_t s = 0; s < 10; ++s) preds.push_back(ForestRegressor::fit(Z, d.y, p, s).predict(probe));
    const double mean = std::accumulate(preds.begin(), preds.end(), 0.0) / preds.size();
    double var = 0;
    for (double v : preds) var += (v - mean) * (v - mean);
    return var / preds.size();
  };
  EXPECT_LT(seed_variance(100), seed_variance(5));
}

TEST(Forest, ThreadCountDoesNotChangeTrees) {
  const auto d = synthetic(100, 3, 15);
  ForestParams p;
  p.n_trees = 20;
  p.threads = 1;
  const auto a = ForestRegressor::fit(d.X, d.y, p, 3);
  p.threads = 4;
  const auto b = ForestRegressor::fit(d.X, d.y, p, 3);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(a.predict(d.X.row(i)), b.predict(d.X.row(i)));
}

TEST(Kernel, RidgePredictionIgnoresRowOrder) {
  const auto d = synthetic(80, 3, 16);
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(2);
  rng.shuffle(perm);
  const auto shuffled = d.subset(perm);
  const auto a = train(spec_of(ModelKind::kernel_rbf), d);
  const auto b = train(spec_of(ModelKind::kernel_rbf), shuffled);
  const auto probe = synthetic(50, 3, 17);
  const auto pa = a.predict(probe.X, "h");
  const auto pb = b.predict(probe.X, "h");
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pa[i], pb[i], 1e-9);
}

TEST(Kernel, RbfKernelValues) {
  const std::vector<double> a{0, 0}, b{1, 1};
  EXPECT_EQ(rbf_kernel(a, a, 0.7), 1.0);
  EXPECT_NEAR(rbf_kernel(a, b, 0.5), std::exp(-1.0), 1e-15);
}

TEST(Cholesky, SolvesSpdSystem) {
  Matrix a(3, 3, std::vector<double>{4, 2, 0.6, 2, 5, 1, 0.6, 1, 3});
  const Matrix orig = a;
  cholesky_decompose(a);
  const std::vector<double> b{1, 2, 3};
  const auto x = cholesky_solve(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += orig(i, j) * x[j];
    EXPECT_NEAR(s, b[i], 1e-12);
  }
  Matrix bad(2, 2, std::vector<double>{1, 2, 2, 1});
  EXPECT_THROW(cholesky_decompose(bad), TrainingError);
}

// --------------------------------------------------------- serialization

TEST(Model, SaveLoadRoundTripForEveryKind) {
  const auto d = synthetic(60, 3, 18);
  const auto dir = osmheight::testing::scratch_dir("models");
  for (auto kind : {ModelKind::linear_gd, ModelKind::random_forest, ModelKind::kernel_rbf,
                    ModelKind::dense_net}) {
    const auto model = train(spec_of(kind), d);
    const auto path = dir / (to_string(kind) + ".model");
    model.save(path);
    const auto back = TrainedModel::load(path);
    EXPECT_EQ(back.kind(), kind);
    EXPECT_EQ(back.manifest_hash(), "h");
    EXPECT_EQ(back.predict(d.X, "h"), model.predict(d.X, "h")) << to_string(kind);
  }
  write_text_file(dir / "junk.model", "not a model");
  EXPECT_THROW(TrainedModel::load(dir / "junk.model"), InputError);
}

TEST(ModelSpecJson, RoundTripAndUnknownKeys) {
  ModelSpec s = spec_of(ModelKind::kernel_rbf);
  s.kernel.gamma = 0.25;
  s.kernel.solver = KernelSolver::svr_smo;
  s.seed = 99;
  const auto back = ModelSpec::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  EXPECT_EQ(ModelSpec::from_json("dense_net").kind, ModelKind::dense_net);
  EXPECT_THROW(ModelSpec::from_json("svm"), InputError);
  auto j = s.to_json();
  j["hyperparameters"]["bogus"] = 1;
  EXPECT_THROW(ModelSpec::from_json(j), InputError);
  j = s.to_json();
  j["colour"] = "red";
  EXPECT_THROW(ModelSpec::from_json(j), InputError);
}

// ------------------------------------------------------------ experiment

ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  ModelSpec rf = spec_of(ModelKind::random_forest);
  cfg.kinds = {rf};
  cfg.seeds = {0, 1};
  cfg.validation_size = 60;
  cfg.raw_budget = 40;
  cfg.svi_budget = 40;
  return cfg;
}

TEST(Experiment, ReportShapeAndDeterminism) {
  const auto fm = feature_matrix(200, 20);
  const auto raw = labels_for(fm, 0.5, 1);
  const auto pseudo = labels_for(fm, 1.5, 2);
  const auto cfg = small_experiment();
  const auto report = run_experiment(fm, raw, pseudo, cfg);
  ASSERT_EQ(report.rows.size(), 6u);
  std::set<std::string> sets;
  for (const auto& r : report.rows) {
    sets.insert(r.set);
    EXPECT_EQ(r.n_validation, 60u);
    EXPECT_EQ(r.kind, "random_forest");
    EXPECT_GE(r.rmse, r.mae);
  }
  EXPECT_EQ(sets, (std::set<std::string>{"RAW", "SVI", "SSL"}));
  EXPECT_EQ(run_experiment(fm, raw, pseudo, cfg).to_csv(), report.to_csv());
  const auto j = report.to_json();
  EXPECT_TRUE(j.contains("summary"));
  EXPECT_EQ(j["rows"].size(), 6u);
}

TEST(Experiment, ValidationBuildingsNeverTrain) {
  const auto fm = feature_matrix(120, 21);
  const auto raw = labels_for(fm, 0.5, 1);
  // Pseudo-labels that are wildly off only on validation ids would leak
  // into SVI scores if those ids were trained on.
  auto cfg = small_experiment();
  cfg.seeds = {0};
  std::vector<std::string> val;
  for (std::size_t i = 0; i < 40; ++i) val.push_back(fm.building_ids()[i]);
  cfg.validation_ids = val;
  cfg.raw_budget.reset();
  cfg.svi_budget.reset();
  // Identical pools leave the SSL mix nothing to add (RAW wins on overlap).
  cfg.sets = {TrainingSetKind::RAW, TrainingSetKind::SVI};
  auto pseudo = raw;
  const auto clean = run_experiment(fm, raw, pseudo, cfg);
  for (std::size_t i = 0; i < 40; ++i) pseudo[i].height += 500.0;
  const auto poisoned = run_experiment(fm, raw, pseudo, cfg);
  EXPECT_EQ(clean.to_csv(), poisoned.to_csv());
  for (const auto& r : clean.rows) EXPECT_EQ(r.n_validation, 40u);
}

TEST(Experiment, ConfigJsonRoundTrip) {
  auto cfg = small_experiment();
  cfg.sets = {TrainingSetKind::SSL};
  cfg.feature_subsets = {FeatureSubset::building};
  cfg.mix_a = 0.25;
  cfg.protocol = Protocol::split;
  const auto back = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(ExperimentConfig::from_json(nlohmann::json::object()).kinds.size(), 1u);
  EXPECT_THROW(ExperimentConfig::from_json({{"sets", {"RAW"}}, {"oops", 1}}), InputError);
}

TEST(Experiment, HeightLabelCsvRoundTrip) {
  const std::vector<HeightLabel> in{{"way/1", 12.5}, {"rel/3#1", 3.0000000000000004}};
  const auto dir = osmheight::testing::scratch_dir("labels");
  write_height_labels_csv(dir / "l.csv", in);
  const auto out = read_height_labels_csv(dir / "l.csv");
  ASSERT_EQ(out.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(out[i].building_id, in[i].building_id);
    EXPECT_EQ(out[i].height, in[i].height);
  }
}

}  // namespace
}  // namespace osmheight::ssl
