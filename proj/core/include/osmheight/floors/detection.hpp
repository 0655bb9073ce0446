// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace osmheight::floors {

enum class DetectionClass { window, door, balcony };

std::string to_string(DetectionClass c);

/// Image-space box, y grows downward.
struct Detection {
  DetectionClass cls = DetectionClass::window;
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
  double confidence = 1.0;

  double y_center() const { return 0.5 * (ymin + ymax); }
  double height() const { return ymax - ymin; }
};

struct DetectionSet {
  std::string image_id;
  int image_width_px = 0;
  int image_height_px = 0;
  std::vector<Detection> detections;
};

/// One line of the detection interchange format. Throws ParseError naming
/// the offending field when a box leaves the image, is empty or the
/// confidence is outside [0, 1].
DetectionSet parse_detection_set(const nlohmann::json& j);
nlohmann::json to_json(const DetectionSet& d);

std::vector<DetectionSet> read_detections_jsonl(const std::filesystem::path& path);
void write_detections_jsonl(const std::filesystem::path& path, std::span<const DetectionSet> sets);

}  // namespace osmheight::floors
