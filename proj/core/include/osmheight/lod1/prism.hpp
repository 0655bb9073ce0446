// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "osmheight/geodata/footprint.hpp"

namespace osmheight::lod1 {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// A planar face: first ring is the boundary, further rings are holes. Rings
/// are open lists of vertex indices; the boundary runs counter-clockwise seen
/// from outside the solid.
using Face = std::vector<std::vector<std::size_t>>;

inline constexpr double kDefaultMinHeight = 2.5;

/// Footprint extruded from z=0 to z=height. Vertices are the open ring
/// vertices of exterior then holes at z=0, followed by the same sequence at
/// z=height. faces[0] is the bottom, faces[1] the top, the rest are walls.
struct PrismSolid {
  std::string building_id;
  geodata::Polygon footprint;
  double height = 0.0;
  std::vector<Point3> vertices;
  std::vector<Face> faces;

  std::size_t wall_count() const { return faces.size() - 2; }
  const Face& bottom() const { return faces[0]; }
  const Face& top() const { return faces[1]; }
  double footprint_area() const { return geodata::polygon_area(footprint); }
  double volume() const { return footprint_area() * height; }
};

/// Throws DomainError when height < min_height or is not finite.
PrismSolid extrude(const geodata::Footprint& f, double height,
                   double min_height = kDefaultMinHeight);

}  // namespace osmheight::lod1
