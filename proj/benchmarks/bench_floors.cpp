// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "osmheight/floors/floor_estimate.hpp"
#include "osmheight/floors/row_clustering.hpp"
#include "osmheight/pipeline/synthetic_city.hpp"

namespace osmheight::bench {
namespace {

void BM_EstimateFloors(benchmark::State& state) {
  Rng rng(2);
  std::vector<floors::DetectionSet> facades;
  for (int i = 0; i < 64; ++i) {
    facades.push_back(pipeline::synthesize_facade("img", static_cast<int>(state.range(0)), 0.1, rng));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& d = facades[i++ % facades.size()];
    benchmark::DoNotOptimize(floors::estimate_floors(floors::cluster_rows(d), d));
  }
}
BENCHMARK(BM_EstimateFloors)->Arg(2)->Arg(6)->Arg(20);

void BM_TwoMeans(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (double& x : v) x = rng.uniform(0, 100);
  std::sort(v.begin(), v.end());
  for (auto _ : state) benchmark::DoNotOptimize(floors::two_means_1d(v));
}
BENCHMARK(BM_TwoMeans)->Arg(8)->Arg(64)->Arg(512);

}  // namespace
}  // namespace osmheight::bench
