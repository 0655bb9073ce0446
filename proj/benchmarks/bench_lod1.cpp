// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <numbers>

#include "bench_city.hpp"
#include "osmheight/lod1/cityjson.hpp"
#include "osmheight/lod1/obj.hpp"
#include "osmheight/lod1/triangulate.hpp"

namespace osmheight::bench {
namespace {

// Regular n-gon with a wobbly radius so ear search does real work.
geodata::Polygon wobbly(int n) {
  geodata::Polygon p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    const double r = 20.0 + (i % 2 ? 3.0 : 0.0);
    p.exterior.push_back({r * std::cos(a), r * std::sin(a)});
  }
  p.exterior.push_back(p.exterior.front());
  return p;
}

void BM_Triangulate(benchmark::State& state) {
  const auto poly = wobbly(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lod1::triangulate(poly));
}
BENCHMARK(BM_Triangulate)->Arg(8)->Arg(64)->Arg(256);

lod1::CityModel model() {
  const City city = make_city(12);
  std::map<std::string, double> heights;
  for (const auto& t : city.raw.truth) heights[t.id] = t.height;
  return lod1::build_city_model(city.footprints, heights, {}, city.projection.origin()).model;
}

void BM_CityJson(benchmark::State& state) {
  const auto m = model();
  for (auto _ : state) benchmark::DoNotOptimize(lod1::to_cityjson(m).dump());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.solids.size()));
}
BENCHMARK(BM_CityJson)->Unit(benchmark::kMillisecond);

void BM_Obj(benchmark::State& state) {
  const auto m = model();
  for (auto _ : state) benchmark::DoNotOptimize(lod1::to_obj(m));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.solids.size()));
}
BENCHMARK(BM_Obj)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace osmheight::bench
