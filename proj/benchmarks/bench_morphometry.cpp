// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "bench_city.hpp"
#include "osmheight/morphometry/features.hpp"
#include "osmheight/geodata/spatial_index.hpp"

namespace osmheight::bench {
namespace {

void BM_FeatureMatrix(benchmark::State& state) {
  const City city = make_city(static_cast<int>(state.range(0)));
  morphometry::MorphometryConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphometry::assemble_matrix(city.footprints, city.streets, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(city.footprints.size()));
  state.counters["buildings"] = static_cast<double>(city.footprints.size());
}
BENCHMARK(BM_FeatureMatrix)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_BuildingBase(benchmark::State& state) {
  const City city = make_city(8);
  const auto index = geodata::build_spatial_index(city.footprints);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(morphometry::building_base_features(i, city.footprints, index));
    i = (i + 1) % city.footprints.size();
  }
}
BENCHMARK(BM_BuildingBase);

}  // namespace
}  // namespace osmheight::bench
