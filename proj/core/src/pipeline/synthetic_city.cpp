// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/pipeline/synthetic_city.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "osmheight/errors.hpp"
#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/morphometry/manifest.hpp"
#include "osmheight/svi/camera.hpp"
#include "osmheight/svi/ray_cast.hpp"

namespace osmheight::pipeline {

using geodata::Point2;
using nlohmann::json;

json SyntheticCitySpec::to_json() const {
  return {{"seed", seed},
          {"grid_blocks", grid_blocks},
          {"buildings_per_block", buildings_per_block},
          {"block_size_m", block_size_m},
          {"setback_m", setback_m},
          {"max_rotation_deg", max_rotation_deg},
          {"commercial_fraction", commercial_fraction},
          {"height",
           {{"intercept", height.intercept},
            {"area_weight", height.area_weight},
            {"elongation_weight", height.elongation_weight},
            {"centre_weight", height.centre_weight},
            {"noise_sd", height.noise_sd}}},
          {"pseudo_error_p", pseudo_error_p},
          {"floor_rounding", floor_rounding == FloorRounding::nearest ? "nearest" : "down"},
          {"camera_fraction", camera_fraction},
          {"row_jitter", row_jitter},
          {"origin", {origin.lon, origin.lat}}};
}

SyntheticCitySpec SyntheticCitySpec::from_json(const json& j) {
  SyntheticCitySpec s;
  if (!j.is_object()) throw InputError("synthetic city spec must be an object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (k == "grid_blocks") {
        s.grid_blocks = v.get<int>();
      } else if (k == "buildings_per_block") {
        s.buildings_per_block = v.get<int>();
      } else if (k == "block_size_m") {
        s.block_size_m = v.get<double>();
      } else if (k == "setback_m") {
        s.setback_m = v.get<double>();
      } else if (k == "max_rotation_deg") {
        s.max_rotation_deg = v.get<double>();
      } else if (k == "commercial_fraction") {
        s.commercial_fraction = v.get<double>();
      } else if (k == "height") {
        for (const auto& [hk, hv] : v.items()) {
          double* slot = nullptr;
          if (hk == "intercept") slot = &s.height.intercept;
          if (hk == "area_weight") slot = &s.height.area_weight;
          if (hk == "elongation_weight") slot = &s.height.elongation_weight;
          if (hk == "centre_weight") slot = &s.height.centre_weight;
          if (hk == "noise_sd") slot = &s.height.noise_sd;
          if (!slot) throw InputError("unknown height model key '" + hk + "'");
          *slot = hv.get<double>();
        }
      } else if (k == "pseudo_error_p") {
        s.pseudo_error_p = v.get<double>();
      } else if (k == "floor_rounding") {
        const auto r = v.get<std::string>();
        if (r != "nearest" && r != "down") throw InputError("floor_rounding: nearest or down");
        s.floor_rounding = r == "nearest" ? FloorRounding::nearest : FloorRounding::down;
      } else if (k == "camera_fraction") {
        s.camera_fraction = v.get<double>();
      } else if (k == "row_jitter") {
        s.row_jitter = v.get<double>();
      } else if (k == "origin") {
        s.origin = {v.at(0).get<double>(), v.at(1).get<double>()};
      } else {
        throw InputError("unknown synthetic city key '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad synthetic city spec: ") + e.what());
  }
  if (s.grid_blocks < 1 || s.buildings_per_block < 1) {
    throw InputError("grid_blocks and buildings_per_block must be positive");
  }
  if (!(s.block_size_m > 2.0 * s.setback_m + 4.0) || s.setback_m < 0.0) {
    throw InputError("block_size_m too small for the setback");
  }
  if (s.pseudo_error_p < 0.0 || s.pseudo_error_p > 1.0 || s.camera_fraction < 0.0 ||
      s.camera_fraction > 1.0 || s.commercial_fraction < 0.0 || s.commercial_fraction > 1.0) {
    throw InputError("probabilities must lie in [0, 1]");
  }
  if (s.row_jitter < 0.0 || s.row_jitter > 0.25) throw InputError("row_jitter must lie in [0, 0.25]");
  if (s.height.noise_sd < 0.0) throw InputError("height.noise_sd must be non-negative");
  return s;
}

std::vector<ssl::HeightLabel> SyntheticCity::truth_labels() const {
  std::vector<ssl::HeightLabel> out;
  out.reserve(truth.size());
  for (const auto& b : truth) out.push_back({b.id, b.height});
  return out;
}

void SyntheticCity::write(const std::filesystem::path& dir) const {
  write_text_file(dir / "buildings.geojson", buildings.dump() + "\n");
  write_text_file(dir / "streets.geojson", streets.dump() + "\n");
  std::string cams;
  for (const auto& c : cameras) cams += c.dump() + "\n";
  write_text_file(dir / "cameras.jsonl", cams);
  floors::write_detections_jsonl(dir / "detections.jsonl", detections);
  std::string csv = "building_id,height_m,floors,block\n";
  for (const auto& b : truth) {
    csv += b.id + "," + morphometry::format_double(b.height) + "," + std::to_string(b.floors) +
           "," + std::to_string(b.block) + "\n";
  }
  write_text_file(dir / "truth.csv", csv);
}

floors::DetectionSet synthesize_facade(const std::string& image_id, int floors, double row_jitter,
                                       Rng& rng) {
  constexpr int kWidth = 1024;
  constexpr int kHeight = 768;
  floors::DetectionSet d;
  d.image_id = image_id;
  d.image_width_px = kWidth;
  d.image_height_px = kHeight;
  const double top = 0.08 * kHeight;
  const double bottom = 0.96 * kHeight;
  const double spacing = (bottom - top) / floors;
  const double win_h = 0.4 * spacing;
  for (int r = 0; r < floors; ++r) {
    const double centre = top + (r + 0.5) * spacing + rng.uniform(-row_jitter, row_jitter) * spacing;
    const int n = 1 + static_cast<int>(rng.index(6));
    const double slot = 0.9 * kWidth / n;
    for (int w = 0; w < n; ++w) {
      const double cx = 0.05 * kWidth + (w + 0.5) * slot;
      const double half_w = 0.25 * std::min(slot, 120.0);
      d.detections.push_back({floors::DetectionClass::window, cx - half_w, centre - 0.5 * win_h,
                              cx + half_w, centre + 0.5 * win_h, rng.uniform(0.6, 0.99)});
    }
    if (r == floors - 1 && rng.bernoulli(0.5)) {
      const double cx = rng.uniform(0.1, 0.9) * kWidth;
      d.detections.push_back({floors::DetectionClass::door, cx - 20.0, centre - 0.3 * spacing,
                              cx + 20.0, centre + 0.3 * spacing, rng.uniform(0.6, 0.99)});
    }
  }
  return d;
}

namespace {

std::string make_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, i);
  return buf;
}

struct Rect {
  Point2 centre;
  double width = 0.0;  // along the street
  double depth = 0.0;  // away from the street
  double angle = 0.0;  // radians

  geodata::Ring ring() const {
    const double c = std::cos(angle), s = std::sin(angle);
    const Point2 u{c, s}, v{-s, c};
    const double hw = 0.5 * width, hd = 0.5 * depth;
    geodata::Ring r{centre - hw * u - hd * v, centre + hw * u - hd * v, centre + hw * u + hd * v,
                    centre - hw * u + hd * v};
    r.push_back(r.front());
    return r;
  }
};

json point_json(const geodata::LocalProjection& proj, Point2 p) {
  const auto g = proj.unproject(p);
  return json::array({g.lon, g.lat});
}

}  // namespace

SyntheticCity generate_synthetic_city(const SyntheticCitySpec& spec) {
  SyntheticCity city;
  const geodata::LocalProjection proj(spec.origin);
  const int k = spec.grid_blocks;
  const double B = spec.block_size_m;
  const double half = 0.5 * k * B;
  Rng rng(spec.seed);

  // Streets: k + 1 full-length lines each way.
  city.streets = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (int i = 0; i <= k; ++i) {
    const double c = -half + i * B;
    const json props = {{"highway", "residential"}, {"width", "12"}};
    city.streets["features"].push_back(
        {{"type", "Feature"},
         {"id", "h" + std::to_string(i)},
         {"properties", props},
         {"geometry",
          {{"type", "LineString"},
           {"coordinates",
            json::array({point_json(proj, {-half, c}), point_json(proj, {half, c})})}}}});
    city.streets["features"].push_back(
        {{"type", "Feature"},
         {"id", "v" + std::to_string(i)},
         {"properties", props},
         {"geometry",
          {{"type", "LineString"},
           {"coordinates",
            json::array({point_json(proj, {c, -half}), point_json(proj, {c, half})})}}}});
  }

  struct Placed {
    Rect rect;
    std::size_t block;
    bool north;           // fronts the street above the block
    double street_coord;  // y of the fronting street centreline
  };
  std::vector<Placed> placed;
  const double max_rot = spec.max_rotation_deg * std::numbers::pi / 180.0;
  for (int bi = 0; bi < k; ++bi) {
    for (int bj = 0; bj < k; ++bj) {
      const std::size_t block = static_cast<std::size_t>(bi * k + bj);
      const double x0 = -half + bj * B + spec.setback_m;
      const double x1 = -half + (bj + 1) * B - spec.setback_m;
      const double y0 = -half + bi * B;
      const double y1 = y0 + B;
      const double row_depth = 0.5 * (B - 2.0 * spec.setback_m);
      const int n_south = (spec.buildings_per_block + 1) / 2;
      const int n_north = spec.buildings_per_block - n_south;
      for (int row = 0; row < 2; ++row) {
        const bool north = row == 1;
        const int n = north ? n_north : n_south;
        if (n == 0) continue;
        const double lot_w = (x1 - x0) / n;
        for (int l = 0; l < n; ++l) {
          Rect r;
          r.width = lot_w * rng.uniform(0.5, 0.85);
          r.depth = row_depth * rng.uniform(0.35, 0.8);
          r.angle = rng.uniform(-max_rot, max_rot);
          auto extent = [&](double a) {
            const double c = std::abs(std::cos(a)), s = std::abs(std::sin(a));
            return std::pair{0.5 * (r.width * c + r.depth * s), 0.5 * (r.width * s + r.depth * c)};
          };
          auto [ex, ey] = extent(r.angle);
          if (2.0 * ex > 0.95 * lot_w || 2.0 * ey > 0.95 * row_depth) {
            r.angle = 0.0;
            std::tie(ex, ey) = extent(0.0);
          }
          const double lot_cx = x0 + (l + 0.5) * lot_w;
          const double slack_x = 0.5 * lot_w - ex;
          const double gap = rng.uniform(0.0, 0.3) * (row_depth - 2.0 * ey);
          r.centre.x = lot_cx + rng.uniform(-0.8, 0.8) * slack_x;
          r.centre.y = north ? y1 - spec.setback_m - gap - ey : y0 + spec.setback_m + gap + ey;
          placed.push_back({r, block, north, north ? y1 : y0});
        }
      }
    }
  }
  city.block_count = static_cast<std::size_t>(k * k);

  std::vector<geodata::Footprint> footprints;
  city.buildings = {{"type", "FeatureCollection"}, {"features", json::array()}};
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto& p = placed[i];
    const bool commercial = rng.bernoulli(spec.commercial_fraction);
    const double floor_h = commercial ? 3.5 : 2.5;
    const auto ring = p.rect.ring();
    const double area = p.rect.width * p.rect.depth;

    const double bx = -half + (static_cast<double>(p.block % k) + 0.5) * B;
    const double by = -half + (static_cast<double>(p.block / k) + 0.5) * B;
    const double h = spec.height.intercept + spec.height.area_weight * area +
                     spec.height.elongation_weight * (p.rect.depth / p.rect.width) +
                     spec.height.centre_weight * std::hypot(bx, by) / 100.0 +
                     rng.normal(0.0, spec.height.noise_sd);

    SyntheticBuilding b;
    b.id = make_id("b", i);
    b.block = p.block;
    b.height = std::max(2.5, h);
    const double q = b.height / floor_h;
    b.floors = std::max(1, static_cast<int>(spec.floor_rounding == FloorRounding::nearest
                                                ? std::round(q)
                                                : std::floor(q)));
    city.truth.push_back(b);

    json coords = json::array();
    for (const auto& v : ring) coords.push_back(point_json(proj, v));
    city.buildings["features"].push_back(
        {{"type", "Feature"},
         {"id", b.id},
         {"properties", {{"building", commercial ? "commercial" : "house"}}},
         {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({coords})}}}});
    footprints.push_back(geodata::Footprint::create(b.id, {ring, {}}));
  }

  const auto index = geodata::build_spatial_index(footprints);
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto& p = placed[i];
    auto& b = city.truth[i];
    const bool take = rng.bernoulli(spec.camera_fraction);
    const double dx = rng.uniform(-0.5, 0.5);
    const bool wrong = rng.bernoulli(spec.pseudo_error_p);
    const bool up = rng.bernoulli(0.5);
    if (!take) continue;

    svi::CameraRecord cam;
    cam.image_id = make_id("img", i);
    cam.position = {p.rect.centre.x + dx, p.street_coord};
    cam.compass_angle = p.north ? 180.0 : 0.0;
    cam.geo = proj.unproject(cam.position);
    const auto hit = svi::cast_ray(cam, footprints, index);
    if (!hit || hit->building_id != b.id) continue;

    b.photographed = true;
    b.shown_floors = b.floors;
    if (wrong) b.shown_floors = (up || b.floors == 1) ? b.floors + 1 : b.floors - 1;
    cam.altitude = 2.0;
    cam.camera_type = svi::CameraType::perspective;
    cam.captured_at = 1600000000000 + static_cast<std::int64_t>(i) * 1000;
    cam.camera_parameters = std::array<double, 3>{0.8, 0.0, 0.0};
    cam.rotation = std::array<double, 3>{0.0, 0.0, 0.0};
    city.cameras.push_back(svi::to_mapillary_json(cam));
    city.detections.push_back(synthesize_facade(cam.image_id, b.shown_floors, spec.row_jitter, rng));
  }
  return city;
}

}  // namespace osmheight::pipeline
