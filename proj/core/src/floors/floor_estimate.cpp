// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/floors/floor_estimate.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/morphometry/manifest.hpp"

namespace osmheight::floors {

using geodata::BuildingFunction;

FloorEstimate estimate_floors(const RowClustering& r, const DetectionSet& d) {
  struct Band {
    double top, bottom;
  };
  std::vector<Band> bands;
  for (const auto& row : r.rows) {
    Band band{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    bool has_window = false;
    for (std::size_t i : row) {
      const auto& det = d.detections[i];
      if (det.cls == DetectionClass::window) {
        has_window = true;
        band.top = std::min(band.top, det.ymin);
        band.bottom = std::max(band.bottom, det.ymax);
      }
    }
    if (has_window) bands.push_back(band);
  }

  FloorEstimate est;
  est.window_rows = static_cast<int>(bands.size());
  for (const auto& row : r.rows) {
    for (std::size_t i : row) {
      const auto& det = d.detections[i];
      if (det.cls != DetectionClass::door) continue;
      const bool overlaps = std::any_of(bands.begin(), bands.end(), [&](const Band& b) {
        return det.ymin < b.bottom && det.ymax > b.top;
      });
      if (!overlaps) est.door_adjusted = true;
    }
  }
  est.floors = est.window_rows + (est.door_adjusted ? 1 : 0);
  if (est.window_rows == 0) est.floors = 1;
  return est;
}

double FloorHeights::of(BuildingFunction f) const {
  switch (f) {
    case BuildingFunction::residential:
      return residential;
    case BuildingFunction::commercial_public:
      return commercial_public;
    case BuildingFunction::unknown:
      return unknown;
  }
  return unknown;
}

double floors_to_height(int floors, BuildingFunction function, const FloorHeights& heights) {
  if (floors < 1) throw DomainError("floor count must be at least 1, got " + std::to_string(floors));
  return floors * heights.of(function);
}

nlohmann::json PseudoLabelReport::to_json() const {
  nlohmann::json reasons = nlohmann::json::object();
  for (const auto& [k, v] : skipped) reasons[k] = v;
  return {{"assignments", assignments}, {"estimated", estimated}, {"labels", labels},
          {"skipped", reasons}};
}

PseudoLabelResult make_pseudo_labels(std::span<const svi::Assignment> assignments,
                                     const std::map<std::string, DetectionSet>& detections,
                                     std::span<const geodata::Footprint> buildings,
                                     const FloorConfig& config) {
  PseudoLabelResult out;
  std::unordered_map<std::string, const geodata::Footprint*> by_id;
  for (const auto& f : buildings) by_id.emplace(f.id, &f);

  struct Sample {
    double height;
    int floors;
  };
  std::map<std::string, std::vector<Sample>> samples;
  for (const auto& a : assignments) {
    ++out.report.assignments;
    const auto det = detections.find(a.image_id);
    if (det == detections.end()) {
      ++out.report.skipped["missing_detections"];
      continue;
    }
    const auto fp = by_id.find(a.building_id);
    if (fp == by_id.end()) {
      ++out.report.skipped["unknown_building"];
      continue;
    }
    try {
      FloorEstimate est = estimate_floors(cluster_rows(det->second, config.cluster), det->second);
      est.building_id = a.building_id;
      samples[a.building_id].push_back(
          {floors_to_height(est.floors, fp->second->function, config.heights), est.floors});
      out.estimates.push_back(std::move(est));
      ++out.report.estimated;
    } catch (const NoDetectionsError&) {
      ++out.report.skipped["no_detections"];
    }
  }

  for (auto& [id, s] : samples) {
    std::stable_sort(s.begin(), s.end(),
                     [](const Sample& l, const Sample& r) { return l.height < r.height; });
    const Sample& mid = s[(s.size() - 1) / 2];
    out.labels.push_back({id, mid.height, mid.floors, by_id.at(id)->function, s.size()});
  }
  out.report.labels = out.labels.size();
  return out;
}

void write_pseudo_labels_csv(const std::filesystem::path& path,
                             std::span<const PseudoLabel> labels) {
  std::string out = "building_id,floors,height_m,n_images,function\n";
  for (const auto& l : labels) {
    out += l.building_id + "," + std::to_string(l.floors) + "," +
           morphometry::format_double(l.height) + "," + std::to_string(l.n_images) + "," +
           std::string(geodata::to_string(l.function_used)) + "\n";
  }
  write_text_file(path, out);
}

std::vector<PseudoLabel> read_pseudo_labels_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("building_id,floors,height_m", 0) != 0) {
    throw InputError(path.string() + ": not a pseudo-label CSV");
  }
  std::vector<PseudoLabel> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw InputError(path.string() + ": malformed row '" + line + "'");
    PseudoLabel l;
    l.building_id = cells[0];
    auto num = [&](const std::string& s, auto& v) {
      if (std::from_chars(s.data(), s.data() + s.size(), v).ec != std::errc()) {
        throw InputError(path.string() + ": bad number '" + s + "'");
      }
    };
    num(cells[1], l.floors);
    num(cells[2], l.height);
    if (cells.size() > 3) num(cells[3], l.n_images);
    if (cells.size() > 4) l.function_used = geodata::building_function_from_string(cells[4]);
    if (!(l.height > 0.0)) throw InputError(path.string() + ": non-positive height for " + l.building_id);
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace osmheight::floors
