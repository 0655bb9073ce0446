// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/svi/ray_cast.hpp"

#include <charconv>
#include <sstream>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/morphometry/manifest.hpp"

namespace osmheight::svi {

using geodata::Box;
using geodata::Footprint;
using geodata::Point2;
using nlohmann::json;

namespace {

constexpr double kBoundaryTol = 1e-9;

bool strictly_inside(Point2 p, const Footprint& f) {
  if (!f.bbox.contains(p) || !geodata::point_in_polygon(p, f.polygon)) return false;
  if (geodata::on_ring_boundary(p, f.exterior(), kBoundaryTol)) return false;
  for (const auto& h : f.holes()) {
    if (geodata::on_ring_boundary(p, h, kBoundaryTol)) return false;
  }
  return true;
}

std::optional<double> ring_hit(Point2 o, Point2 dir, const geodata::Ring& ring) {
  std::optional<double> best;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (auto t = geodata::ray_segment_hit(o, dir, ring[i], ring[i + 1])) {
      if (!best || *t < *best) best = t;
    }
  }
  return best;
}

}  // namespace

std::optional<Assignment> cast_ray(const CameraRecord& cam, std::span<const Footprint> footprints,
                                   const geodata::SpatialIndex& index, double max_range) {
  const Point2 o = cam.position;
  const Point2 dir = bearing_to_direction(cam.compass_angle);
  Box ray_box;
  ray_box.expand(o);
  ray_box.expand(o + max_range * dir);

  std::optional<Assignment> best;
  for (std::size_t i : index.query(ray_box)) {
    const Footprint& f = footprints[i];
    if (strictly_inside(o, f)) {
      throw InsideBuildingError("camera " + cam.image_id + " is inside building " + f.id);
    }
    std::optional<double> t = ring_hit(o, dir, f.exterior());
    for (const auto& h : f.holes()) {
      if (auto th = ring_hit(o, dir, h); th && (!t || *th < *t)) t = th;
    }
    if (!t || *t > max_range) continue;
    const bool closer = !best || *t < best->hit_distance - kHitTieTolerance;
    const bool tie_wins = best && std::abs(*t - best->hit_distance) <= kHitTieTolerance &&
                          f.id < best->building_id;
    if (closer || tie_wins) {
      best = Assignment{cam.image_id, f.id, o + *t * dir, *t};
    }
  }
  return best;
}

json AlignReport::to_json() const {
  json reasons = json::object();
  for (const auto& [k, v] : error_reasons) reasons[k] = v;
  return {{"parsed", parsed},   {"assigned", assigned}, {"none", none},
          {"errors", errors},   {"filtered", filtered}, {"error_reasons", reasons},
          {"warnings", warnings}};
}

AlignResult align_images(std::span<const json> records, const geodata::LocalProjection& projection,
                         std::span<const Footprint> footprints, const geodata::SpatialIndex& index,
                         const AlignConfig& config) {
  AlignResult out;
  auto& rep = out.report;
  for (const auto& rec : records) {
    if (config.allowlist) {
      const auto id = rec.is_object() ? rec.find("id") : rec.end();
      const std::string key = (id == rec.end() || id->is_null())
                                  ? std::string()
                                  : (id->is_string() ? id->get<std::string>() : id->dump());
      if (!config.allowlist->contains(key)) {
        ++rep.filtered;
        continue;
      }
    }
    ++rep.parsed;
    try {
      const CameraRecord cam = parse_camera_metadata(rec, projection, &rep.warnings);
      if (auto a = cast_ray(cam, footprints, index, config.max_range_m)) {
        out.assignments.push_back(std::move(*a));
        ++rep.assigned;
      } else {
        ++rep.none;
      }
    } catch (const ParseError& e) {
      ++rep.errors;
      ++rep.error_reasons["parse:" + e.field()];
    } catch (const InsideBuildingError&) {
      ++rep.errors;
      ++rep.error_reasons["inside_building"];
    } catch (const ProjectionError&) {
      ++rep.errors;
      ++rep.error_reasons["projection"];
    }
  }
  return out;
}

std::set<std::string> read_allowlist(const std::filesystem::path& path) {
  std::set<std::string> out;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

void write_assignments_csv(const std::filesystem::path& path,
                           std::span<const Assignment> assignments) {
  std::string out = "image_id,building_id,hit_distance_m\n";
  for (const auto& a : assignments) {
    out += a.image_id + "," + a.building_id + "," + morphometry::format_double(a.hit_distance) + "\n";
  }
  write_text_file(path, out);
}

std::vector<Assignment> read_assignments_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("image_id,building_id,hit_distance_m", 0) != 0) {
    throw InputError(path.string() + ": not an assignments CSV");
  }
  std::vector<Assignment> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw InputError(path.string() + ": malformed row '" + line + "'");
    }
    Assignment a;
    a.image_id = line.substr(0, c1);
    a.building_id = line.substr(c1 + 1, c2 - c1 - 1);
    const char* b = line.data() + c2 + 1;
    if (std::from_chars(b, line.data() + line.size(), a.hit_distance).ec != std::errc()) {
      throw InputError(path.string() + ": bad hit distance in '" + line + "'");
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace osmheight::svi
