// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/lod1/cityjson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::lod1 {

using nlohmann::json;

void CityModel::add(PrismSolid solid) {
  for (const auto& s : solids) {
    if (s.building_id == solid.building_id) {
      throw ContractError("duplicate building id '" + solid.building_id + "' in city model");
    }
  }
  solids.push_back(std::move(solid));
}

json Lod1Config::to_json() const {
  return {{"min_height_m", min_height_m}, {"quantization_m", quantization_m}};
}

Lod1Config Lod1Config::from_json(const json& j) {
  Lod1Config c;
  if (!j.is_object()) throw InputError("lod1 config must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "min_height_m") {
      c.min_height_m = v.get<double>();
    } else if (k == "quantization_m") {
      c.quantization_m = v.get<double>();
    } else {
      throw InputError("unknown lod1 config key '" + k + "'");
    }
  }
  if (!(c.quantization_m > 0.0) || !std::isfinite(c.quantization_m)) {
    throw InputError("lod1.quantization_m must be positive");
  }
  if (!std::isfinite(c.min_height_m)) throw InputError("lod1.min_height_m must be finite");
  return c;
}

json BuildReport::to_json() const {
  json r = json::object();
  for (const auto& [k, v] : reasons) r[k] = v;
  return {{"built", built}, {"skipped", skipped}, {"reasons", r}};
}

ModelBuild build_city_model(std::span<const geodata::Footprint> footprints,
                            const std::map<std::string, double>& heights,
                            const Lod1Config& config, geodata::GeoPoint origin) {
  ModelBuild out;
  out.model.origin = origin;
  out.model.parameters = config.to_json();
  for (const auto& f : footprints) {
    auto it = heights.find(f.id);
    if (it == heights.end()) {
      ++out.report.skipped;
      ++out.report.reasons["no_height"];
      continue;
    }
    if (!(it->second >= config.min_height_m)) {
      ++out.report.skipped;
      ++out.report.reasons["below_min_height"];
      continue;
    }
    out.model.add(extrude(f, it->second, config.min_height_m));
    ++out.report.built;
  }
  return out;
}

namespace {

using Quantized = std::array<std::int64_t, 3>;

std::int64_t quantize(double v, double origin, double scale) {
  const double q = std::round((v - origin) / scale);
  if (!(std::abs(q) < 9.0e15)) throw ExportError("coordinate out of range for quantization");
  return static_cast<std::int64_t>(q);
}

}  // namespace

json to_cityjson(const CityModel& model, double scale) {
  if (model.empty()) throw ExportError("cannot export an empty city model");
  if (!(scale > 0.0)) throw ExportError("quantization scale must be positive");

  std::array<double, 3> lo{std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
  std::array<double, 3> hi{-lo[0], -lo[1], -lo[2]};
  for (const auto& s : model.solids) {
    for (const auto& v : s.vertices) {
      lo = {std::min(lo[0], v.x), std::min(lo[1], v.y), std::min(lo[2], v.z)};
      hi = {std::max(hi[0], v.x), std::max(hi[1], v.y), std::max(hi[2], v.z)};
    }
  }

  std::map<Quantized, std::size_t> pool;
  json vertices = json::array();
  json objects = json::object();
  for (const auto& s : model.solids) {
    std::vector<std::size_t> remap(s.vertices.size());
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      const auto& v = s.vertices[i];
      const Quantized q{quantize(v.x, lo[0], scale), quantize(v.y, lo[1], scale),
                        quantize(v.z, lo[2], scale)};
      auto [it, inserted] = pool.emplace(q, pool.size());
      if (inserted) vertices.push_back({q[0], q[1], q[2]});
      remap[i] = it->second;
    }
    json shell = json::array();
    for (const auto& face : s.faces) {
      json rings = json::array();
      for (const auto& ring : face) {
        json r = json::array();
        for (std::size_t k = 0; k < ring.size(); ++k) {
          if (remap[ring[k]] == remap[ring[(k + 1) % ring.size()]]) {
            throw ExportError("building " + s.building_id +
                              ": quantization merges adjacent vertices");
          }
          r.push_back(remap[ring[k]]);
        }
        rings.push_back(std::move(r));
      }
      shell.push_back(std::move(rings));
    }
    objects[s.building_id] = {
        {"type", "Building"},
        {"attributes", {{"measuredHeight", s.height}}},
        {"geometry", json::array({{{"type", "Solid"}, {"lod", "1"},
                                   {"boundaries", json::array({shell})}}})}};
  }

  const json frame = {{"crs", model.crs},
                      {"origin", {{"lon", model.origin.lon}, {"lat", model.origin.lat}}},
                      {"parameters", model.parameters}};
  return {{"type", "CityJSON"},
          {"version", "1.1"},
          {"transform", {{"scale", {scale, scale, scale}}, {"translate", {lo[0], lo[1], lo[2]}}}},
          {"metadata",
           {{"title", "osmheight LoD1 model " + frame.dump()},
            {"geographicalExtent", {lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]}}}},
          {"CityObjects", std::move(objects)},
          {"vertices", std::move(vertices)}};
}

void export_cityjson(const CityModel& model, const std::filesystem::path& path, double scale) {
  write_text_file(path, to_cityjson(model, scale).dump() + "\n");
}

std::vector<ParsedSolid> parse_cityjson(const json& doc) {
  try {
    if (doc.value("type", "") != "CityJSON") throw InputError("not a CityJSON document");
    std::array<double, 3> scale{1, 1, 1}, translate{0, 0, 0};
    if (doc.contains("transform")) {
      for (int i = 0; i < 3; ++i) {
        scale[i] = doc["transform"]["scale"][i].get<double>();
        translate[i] = doc["transform"]["translate"][i].get<double>();
      }
    }
    std::vector<Point3> pool;
    for (const auto& v : doc.at("vertices")) {
      pool.push_back({v[0].get<double>() * scale[0] + translate[0],
                      v[1].get<double>() * scale[1] + translate[1],
                      v[2].get<double>() * scale[2] + translate[2]});
    }
    std::vector<ParsedSolid> out;
    for (const auto& [id, obj] : doc.at("CityObjects").items()) {
      if (obj.value("type", "") != "Building") continue;
      for (const auto& g : obj.value("geometry", json::array())) {
        if (g.value("type", "") != "Solid") continue;
        ParsedSolid s;
        s.building_id = id;
        if (auto a = obj.find("attributes"); a != obj.end() && a->contains("measuredHeight")) {
          s.measured_height = (*a)["measuredHeight"].get<double>();
        }
        std::map<std::size_t, std::size_t> local;
        auto index = [&](std::size_t global) {
          if (global >= pool.size()) throw InputError("vertex index out of range");
          auto [it, inserted] = local.emplace(global, s.vertices.size());
          if (inserted) s.vertices.push_back(pool[global]);
          return it->second;
        };
        for (const auto& shell : g.at("boundaries")) {
          for (const auto& face : shell) {
            Face f;
            for (const auto& ring : face) {
              std::vector<std::size_t> r;
              for (const auto& i : ring) r.push_back(index(i.get<std::size_t>()));
              f.push_back(std::move(r));
            }
            s.faces.push_back(std::move(f));
          }
        }
        out.push_back(std::move(s));
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed CityJSON: ") + e.what());
  }
}

std::vector<ParsedSolid> read_cityjson(const std::filesystem::path& path) {
  return parse_cityjson(read_json_file(path));
}

}  // namespace osmheight::lod1
