// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/geodata/footprint.hpp"

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::geodata {

using nlohmann::json;

std::string_view to_string(BuildingFunction f) {
  switch (f) {
    case BuildingFunction::residential:
      return "residential";
    case BuildingFunction::commercial_public:
      return "commercial_public";
    case BuildingFunction::unknown:
      return "unknown";
  }
  return "unknown";
}

BuildingFunction building_function_from_string(std::string_view s) {
  if (s == "residential") return BuildingFunction::residential;
  if (s == "commercial_public") return BuildingFunction::commercial_public;
  if (s == "unknown") return BuildingFunction::unknown;
  throw InputError("unknown building function '" + std::string(s) + "'");
}

FunctionMapping FunctionMapping::defaults() {
  FunctionMapping m;
  for (const char* v : {"house", "residential", "apartments", "detached", "semidetached_house",
                        "terrace"}) {
    m.building[v] = BuildingFunction::residential;
  }
  for (const char* v : {"commercial", "retail", "office", "industrial", "public", "school",
                        "church", "university", "hospital"}) {
    m.building[v] = BuildingFunction::commercial_public;
  }
  for (const char* v : {"school", "university", "hospital", "college", "townhall",
                        "place_of_worship", "library", "marketplace"}) {
    m.amenity[v] = BuildingFunction::commercial_public;
  }
  return m;
}

BuildingFunction FunctionMapping::classify(const Tags& tags) const {
  if (auto it = tags.find("building"); it != tags.end()) {
    if (auto f = building.find(it->second); f != building.end()) return f->second;
  }
  if (auto it = tags.find("amenity"); it != tags.end()) {
    if (auto f = amenity.find(it->second); f != amenity.end()) return f->second;
  }
  return BuildingFunction::unknown;
}

Footprint Footprint::create(std::string id, Polygon polygon, BuildingFunction function,
                            Tags tags) {
  Footprint f;
  f.id = std::move(id);
  f.polygon = std::move(polygon);
  f.function = function;
  f.tags = std::move(tags);
  f.area = polygon_area(f.polygon);
  f.centroid = polygon_centroid(f.polygon);
  f.bbox = bounding_box(f.polygon.exterior);
  return f;
}

std::optional<Ring> clean_ring(const std::vector<Point2>& raw, bool ccw, std::string* reason) {
  Ring ring;
  ring.reserve(raw.size() + 1);
  for (const auto& p : raw) {
    if (!ring.empty() && distance(ring.back(), p) <= kRingMergeTolerance) continue;
    ring.push_back(p);
  }
  while (ring.size() > 1 && distance(ring.front(), ring.back()) <= kRingMergeTolerance) {
    ring.pop_back();
  }
  auto fail = [&](const char* why) -> std::optional<Ring> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  if (ring.size() < 3) return fail("degenerate_ring");
  ring.push_back(ring.front());
  const double a = signed_area(ring);
  if (a == 0.0) return fail("zero_area");
  if (ring_self_intersects(ring)) return fail("self_intersection");
  if ((a > 0) != ccw) ring = reversed(ring);
  return ring;
}

json LoadReport::to_json() const {
  json reasons_json = json::object();
  for (const auto& [k, v] : reasons) reasons_json[k] = v;
  return {{"read", read}, {"kept", kept}, {"skipped", skipped}, {"reasons", reasons_json}};
}

namespace {

void collect_from_coords(const json& coords, std::vector<GeoPoint>& out) {
  if (!coords.is_array() || coords.empty()) return;
  if (coords[0].is_number()) {
    if (coords.size() >= 2) out.push_back({coords[0].get<double>(), coords[1].get<double>()});
    return;
  }
  for (const auto& c : coords) collect_from_coords(c, out);
}

std::vector<Point2> project_positions(const json& positions, const LocalProjection& proj) {
  if (!positions.is_array()) throw InputError("GeoJSON ring is not an array");
  std::vector<Point2> out;
  out.reserve(positions.size());
  for (const auto& pos : positions) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw InputError("GeoJSON position must be [lon, lat]");
    }
    out.push_back(proj.project({pos[0].get<double>(), pos[1].get<double>()}));
  }
  return out;
}

Tags read_tags(const json& feature) {
  Tags tags;
  auto it = feature.find("properties");
  if (it == feature.end() || !it->is_object()) return tags;
  for (const auto& [k, v] : it->items()) {
    if (v.is_string()) {
      tags[k] = v.get<std::string>();
    } else if (!v.is_null() && !v.is_object() && !v.is_array()) {
      tags[k] = v.dump();
    }
  }
  return tags;
}

const json& features_of(const json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw InputError("expected a GeoJSON FeatureCollection");
  }
  return doc["features"];
}

}  // namespace

std::vector<GeoPoint> collect_positions(const json& geojson) {
  std::vector<GeoPoint> out;
  for (const auto& f : features_of(geojson)) {
    if (f.contains("geometry") && f["geometry"].is_object()) {
      collect_from_coords(f["geometry"].value("coordinates", json::array()), out);
    }
  }
  return out;
}

std::string feature_id(const json& feature, std::size_t index) {
  auto as_string = [](const json& v) -> std::string {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  if (feature.contains("id") && !feature["id"].is_null()) return as_string(feature["id"]);
  if (auto p = feature.find("properties"); p != feature.end() && p->is_object()) {
    for (const char* key : {"@id", "osm_id", "id"}) {
      if (p->contains(key) && !(*p)[key].is_null()) return as_string((*p)[key]);
    }
  }
  return "feature-" + std::to_string(index);
}

BuildingLoad parse_buildings(const json& feature_collection, const LocalProjection& projection,
                             const FunctionMapping& mapping) {
  BuildingLoad out;
  const auto& features = features_of(feature_collection);
  for (std::size_t fi = 0; fi < features.size(); ++fi) {
    const json& feature = features[fi];
    const json* geom = feature.contains("geometry") ? &feature["geometry"] : nullptr;
    if (!geom || !geom->is_object()) {
      ++out.report.read;
      out.report.skip("missing_geometry");
      continue;
    }
    const std::string type = geom->value("type", "");
    std::vector<json> parts;
    if (type == "Polygon") {
      parts.push_back(geom->value("coordinates", json::array()));
    } else if (type == "MultiPolygon") {
      for (const auto& p : geom->value("coordinates", json::array())) parts.push_back(p);
    } else {
      ++out.report.read;
      out.report.skip("unsupported_geometry");
      continue;
    }

    const std::string base_id = feature_id(feature, fi);
    const Tags tags = read_tags(feature);
    const BuildingFunction function = mapping.classify(tags);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      ++out.report.read;
      const json& rings = parts[k];
      if (!rings.is_array() || rings.empty()) {
        out.report.skip("degenerate_ring");
        continue;
      }
      std::string reason;
      auto exterior = clean_ring(project_positions(rings[0], projection), true, &reason);
      if (!exterior) {
        out.report.skip(reason);
        continue;
      }
      Polygon poly{std::move(*exterior), {}};
      for (std::size_t h = 1; h < rings.size(); ++h) {
        auto hole = clean_ring(project_positions(rings[h], projection), false, &reason);
        if (hole) {
          poly.holes.push_back(std::move(*hole));
        } else {
          ++out.report.reasons["hole_dropped_" + reason];
        }
      }
      if (polygon_area(poly) <= 0.0) {
        out.report.skip("zero_area");
        continue;
      }
      std::string id = parts.size() > 1 ? base_id + "#" + std::to_string(k) : base_id;
      out.footprints.push_back(Footprint::create(std::move(id), std::move(poly), function, tags));
      ++out.report.kept;
    }
  }
  return out;
}

BuildingLoad load_buildings(const std::filesystem::path& path, const LocalProjection& projection,
                            const FunctionMapping& mapping) {
  return parse_buildings(read_json_file(path), projection, mapping);
}

}  // namespace osmheight::geodata
