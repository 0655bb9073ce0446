// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "osmheight/random.hpp"
#include "osmheight/ssl/model.hpp"

namespace osmheight::bench {
namespace {

ssl::LabeledDataset dataset(std::size_t n, std::size_t m) {
  Rng rng(4);
  ssl::LabeledDataset d;
  d.X = ssl::Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double h = 10.0;
    for (std::size_t j = 0; j < m; ++j) {
      d.X(i, j) = rng.normal();
      if (j < 5) h += d.X(i, j);
    }
    d.building_ids.push_back(std::to_string(i));
    d.y.push_back(std::max(2.5, h + rng.normal()));
    d.source.push_back(ssl::LabelSource::RAW);
  }
  d.manifest_hash = "bench";
  return d;
}

void fit(benchmark::State& state, ssl::ModelSpec spec) {
  const auto d = dataset(static_cast<std::size_t>(state.range(0)), 129);
  for (auto _ : state) benchmark::DoNotOptimize(ssl::train(spec, d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ForestFit(benchmark::State& state) {
  ssl::ModelSpec s;
  s.forest.n_trees = 100;
  s.forest.threads = 1;
  fit(state, s);
}
BENCHMARK(BM_ForestFit)->Arg(300)->Arg(616)->Unit(benchmark::kMillisecond);

void BM_KernelRidgeFit(benchmark::State& state) {
  ssl::ModelSpec s;
  s.kind = ssl::ModelKind::kernel_rbf;
  fit(state, s);
}
BENCHMARK(BM_KernelRidgeFit)->Arg(300)->Arg(616)->Unit(benchmark::kMillisecond);

void BM_LinearFit(benchmark::State& state) {
  ssl::ModelSpec s;
  s.kind = ssl::ModelKind::linear_gd;
  s.linear.epochs = 1000;
  fit(state, s);
}
BENCHMARK(BM_LinearFit)->Arg(616)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto d = dataset(616, 129);
  ssl::ModelSpec s;
  s.forest.n_trees = 100;
  const auto model = ssl::train(s, d);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(d.X, d.manifest_hash));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.size()));
}
BENCHMARK(BM_ForestPredict)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace osmheight::bench
