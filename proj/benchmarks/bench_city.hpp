// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/street_network.hpp"
#include "osmheight/pipeline/synthetic_city.hpp"

namespace osmheight::bench {

// Synthetic city parsed into the local frame, as the stages see it.
struct City {
  pipeline::SyntheticCity raw;
  geodata::LocalProjection projection{geodata::GeoPoint{}};
  std::vector<geodata::Footprint> footprints;
  geodata::StreetNetwork streets;
};

inline City make_city(int grid_blocks, int per_block = 8) {
  pipeline::SyntheticCitySpec spec;
  spec.seed = 1;
  spec.grid_blocks = grid_blocks;
  spec.buildings_per_block = per_block;
  City c{pipeline::generate_synthetic_city(spec), geodata::LocalProjection(spec.origin), {}, {}};
  c.footprints = geodata::parse_buildings(c.raw.buildings, c.projection).footprints;
  c.streets = geodata::parse_streets(c.raw.streets, c.projection);
  return c;
}

}  // namespace osmheight::bench
