// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/floors/detection.hpp"

#include <cmath>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::floors {

using nlohmann::json;

std::string to_string(DetectionClass c) {
  switch (c) {
    case DetectionClass::window:
      return "window";
    case DetectionClass::door:
      return "door";
    case DetectionClass::balcony:
      return "balcony";
  }
  return "window";
}

namespace {

DetectionClass class_from(const std::string& s) {
  if (s == "window") return DetectionClass::window;
  if (s == "door") return DetectionClass::door;
  if (s == "balcony") return DetectionClass::balcony;
  throw ParseError("class", "unknown detection class '" + s + "'");
}

int positive_int(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer() || it->get<long long>() <= 0) {
    throw ParseError(key, std::string(key) + " must be a positive integer");
  }
  return it->get<int>();
}

}  // namespace

DetectionSet parse_detection_set(const json& j) {
  if (!j.is_object()) throw ParseError("record", "detection record is not an object");
  DetectionSet d;
  const auto id = j.find("image_id");
  if (id == j.end() || id->is_null()) throw ParseError("image_id", "missing image_id");
  d.image_id = id->is_string() ? id->get<std::string>() : id->dump();
  d.image_width_px = positive_int(j, "image_width_px");
  d.image_height_px = positive_int(j, "image_height_px");
  const auto dets = j.find("detections");
  if (dets == j.end() || !dets->is_array()) throw ParseError("detections", "detections must be a list");
  for (const auto& e : *dets) {
    if (!e.is_object()) throw ParseError("detections", "detection is not an object");
    Detection det;
    if (!e.contains("class") || !e["class"].is_string()) throw ParseError("class", "missing class");
    det.cls = class_from(e["class"].get<std::string>());
    const auto& bb = e.contains("bbox") ? e["bbox"] : json();
    if (!bb.is_array() || bb.size() != 4) throw ParseError("bbox", "bbox must have 4 numbers");
    for (const auto& v : bb) {
      if (!v.is_number()) throw ParseError("bbox", "bbox must have 4 numbers");
    }
    det.xmin = bb[0].get<double>();
    det.ymin = bb[1].get<double>();
    det.xmax = bb[2].get<double>();
    det.ymax = bb[3].get<double>();
    if (!(det.xmin >= 0.0 && det.xmin < det.xmax && det.xmax <= d.image_width_px &&
          det.ymin >= 0.0 && det.ymin < det.ymax && det.ymax <= d.image_height_px)) {
      throw ParseError("bbox", "bbox outside image or empty in " + d.image_id);
    }
    if (!e.contains("confidence") || !e["confidence"].is_number()) {
      throw ParseError("confidence", "missing confidence");
    }
    det.confidence = e["confidence"].get<double>();
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
      throw ParseError("confidence", "confidence outside [0, 1] in " + d.image_id);
    }
    d.detections.push_back(det);
  }
  return d;
}

json to_json(const DetectionSet& d) {
  json dets = json::array();
  for (const auto& e : d.detections) {
    dets.push_back({{"class", to_string(e.cls)},
                    {"bbox", {e.xmin, e.ymin, e.xmax, e.ymax}},
                    {"confidence", e.confidence}});
  }
  return {{"image_id", d.image_id},
          {"image_width_px", d.image_width_px},
          {"image_height_px", d.image_height_px},
          {"detections", dets}};
}

std::vector<DetectionSet> read_detections_jsonl(const std::filesystem::path& path) {
  std::vector<DetectionSet> out;
  for (const auto& j : read_json_lines(path)) out.push_back(parse_detection_set(j));
  return out;
}

void write_detections_jsonl(const std::filesystem::path& path, std::span<const DetectionSet> sets) {
  std::string text;
  for (const auto& d : sets) text += to_json(d).dump() + "\n";
  write_text_file(path, text);
}

}  // namespace osmheight::floors
