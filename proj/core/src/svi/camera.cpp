// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/svi/camera.hpp"

#include <cmath>
#include <numbers>

#include "osmheight/errors.hpp"

namespace osmheight::svi {

using nlohmann::json;

std::string to_string(CameraType t) {
  switch (t) {
    case CameraType::perspective:
      return "perspective";
    case CameraType::fisheye:
      return "fisheye";
    case CameraType::equirectangular:
      return "equirectangular";
  }
  return "perspective";
}

namespace {

CameraType camera_type_from(const std::string& s) {
  if (s == "perspective") return CameraType::perspective;
  if (s == "fisheye") return CameraType::fisheye;
  if (s == "equirectangular" || s == "spherical") return CameraType::equirectangular;
  throw ParseError("camera_type", "unknown camera_type '" + s + "'");
}

double number_field(const json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    throw ParseError(key, std::string("missing required field ") + key);
  }
  if (!it->is_number()) throw ParseError(key, std::string(key) + " is not a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(key, std::string(key) + " is not finite");
  return v;
}

std::array<double, 3> triple(const json& v, const char* key) {
  if (!v.is_array() || v.size() != 3) throw ParseError(key, std::string(key) + " must have 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ParseError(key, std::string(key) + " must have 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

}  // namespace

double normalize_compass(double degrees) {
  double a = std::fmod(degrees, 360.0);
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a = 0.0;  // fmod of tiny negatives can round up to 360
  return a;
}

CameraRecord parse_camera_metadata(const json& record, const geodata::LocalProjection& projection,
                                   std::vector<std::string>* warnings) {
  if (!record.is_object()) throw ParseError("record", "camera record is not an object");
  CameraRecord cam;

  const auto id = record.find("id");
  if (id == record.end() || id->is_null()) throw ParseError("id", "missing required field id");
  cam.image_id = id->is_string() ? id->get<std::string>() : id->dump();

  const auto geom = record.find("computed_geometry");
  if (geom == record.end() || geom->is_null()) {
    throw ParseError("computed_geometry", "missing required field computed_geometry");
  }
  if (!geom->is_object() || geom->value("type", "") != "Point" || !geom->contains("coordinates") ||
      !(*geom)["coordinates"].is_array() || (*geom)["coordinates"].size() < 2 ||
      !(*geom)["coordinates"][0].is_number() || !(*geom)["coordinates"][1].is_number()) {
    throw ParseError("computed_geometry", "computed_geometry must be a GeoJSON Point");
  }
  cam.geo = {(*geom)["coordinates"][0].get<double>(), (*geom)["coordinates"][1].get<double>()};
  if (!cam.geo.valid()) throw ParseError("computed_geometry", "coordinates out of range");
  cam.position = projection.project(cam.geo);

  const double raw = number_field(record, "computed_compass_angle");
  cam.compass_angle = normalize_compass(raw);
  if ((raw < 0.0 || raw >= 360.0) && warnings) {
    warnings->push_back("image " + cam.image_id + ": compass angle " + std::to_string(raw) +
                        " normalized to " + std::to_string(cam.compass_angle));
  }

  if (record.contains("computed_altitude") && !record["computed_altitude"].is_null()) {
    cam.altitude = number_field(record, "computed_altitude");
  }
  if (auto it = record.find("camera_type"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("camera_type", "camera_type is not a string");
    cam.camera_type = camera_type_from(it->get<std::string>());
  }
  if (auto it = record.find("captured_at"); it != record.end() && !it->is_null()) {
    if (!it->is_number()) throw ParseError("captured_at", "captured_at is not a number");
    cam.captured_at = it->get<std::int64_t>();
  }
  if (auto it = record.find("camera_parameters"); it != record.end() && !it->is_null()) {
    cam.camera_parameters = triple(*it, "camera_parameters");
  }
  if (auto it = record.find("computed_rotation"); it != record.end() && !it->is_null()) {
    cam.rotation = triple(*it, "computed_rotation");
  }
  return cam;
}

json to_mapillary_json(const CameraRecord& cam) {
  json j = {{"id", cam.image_id},
            {"computed_geometry",
             {{"type", "Point"}, {"coordinates", {cam.geo.lon, cam.geo.lat}}}},
            {"computed_compass_angle", cam.compass_angle}};
  if (cam.altitude) j["computed_altitude"] = *cam.altitude;
  if (cam.camera_type) j["camera_type"] = to_string(*cam.camera_type);
  if (cam.captured_at) j["captured_at"] = *cam.captured_at;
  if (cam.camera_parameters) j["camera_parameters"] = *cam.camera_parameters;
  if (cam.rotation) j["computed_rotation"] = *cam.rotation;
  return j;
}

geodata::Point2 bearing_to_direction(double compass_deg) {
  // Exact values on the cardinal directions.
  const double a = normalize_compass(compass_deg);
  if (a == 0.0) return {0.0, 1.0};
  if (a == 90.0) return {1.0, 0.0};
  if (a == 180.0) return {0.0, -1.0};
  if (a == 270.0) return {-1.0, 0.0};
  const double t = compass_deg * std::numbers::pi / 180.0;
  return {std::sin(t), std::cos(t)};
}

}  // namespace osmheight::svi
