// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "bench_city.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/svi/ray_cast.hpp"

namespace osmheight::bench {
namespace {

void BM_AlignImages(benchmark::State& state) {
  const City city = make_city(static_cast<int>(state.range(0)));
  const auto index = geodata::build_spatial_index(city.footprints);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svi::align_images(city.raw.cameras, city.projection, city.footprints, index));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(city.raw.cameras.size()));
}
BENCHMARK(BM_AlignImages)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SpatialIndexBuild(benchmark::State& state) {
  const City city = make_city(12);
  for (auto _ : state) benchmark::DoNotOptimize(geodata::build_spatial_index(city.footprints));
}
BENCHMARK(BM_SpatialIndexBuild)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace osmheight::bench
