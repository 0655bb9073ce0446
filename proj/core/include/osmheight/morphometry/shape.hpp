// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "osmheight/geodata/footprint.hpp"
#include "osmheight/geodata/geometry.hpp"

namespace osmheight::morphometry {

using geodata::Point2;
using geodata::Polygon;
using geodata::Ring;

/// Convex hull (Andrew's monotone chain), counter-clockwise, open, without
/// collinear points.
std::vector<Point2> convex_hull(std::span<const Point2> pts);

struct Circle {
  Point2 center;
  double radius = 0.0;
};

/// Smallest circle enclosing all points (incremental Welzl-style
/// construction over the hull vertices).
Circle min_enclosing_circle(std::span<const Point2> pts);

/// Minimum-area bounding rectangle. `length` >= `width`; `axis_deg` is the
/// direction of the long side in degrees, measured counter-clockwise from
/// east, in [0, 180).
struct OrientedRect {
  double length = 0.0;
  double width = 0.0;
  double axis_deg = 0.0;
  double area() const { return length * width; }
  double perimeter() const { return 2.0 * (length + width); }
};
OrientedRect min_area_rect(std::span<const Point2> pts);

/// Deviation of an axis direction from the nearest cardinal direction, in
/// [0, 45] degrees.
double cardinal_deviation(double axis_deg);

/// Vertices whose turning angle exceeds `threshold_deg` (the interior angle
/// deviates from 180 degrees by more than that).
int corner_count(const Ring& ring, double threshold_deg = 10.0);

/// The eight shape descriptors shared by buildings and street blocks.
struct ShapeMetrics {
  double area = 0.0;
  double perimeter = 0.0;
  double circular_compactness = 0.0;  // area / (pi r_mec^2)
  double convexity = 0.0;             // area / hull area
  double orientation = 0.0;           // degrees in [0, 45]
  double corner_count = 0.0;
  double longest_axis_length = 0.0;   // minimum enclosing circle diameter
  double equivalent_rectangular_index = 0.0;
};
ShapeMetrics shape_metrics(const Polygon& poly);

/// Length of the footprint boundary lying on the boundary of any of
/// `others` (collinear within `tol`).
double shared_wall_length(const geodata::Footprint& subject,
                          std::span<const geodata::Footprint* const> others, double tol = 1e-6);

}  // namespace osmheight::morphometry
