// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace osmheight::geodata {

/// Planar point in the local metric frame (x = east, y = north, metres).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Orientation of c relative to the directed line a->b: > 0 left, < 0 right.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  bool empty() const { return min_x > max_x || min_y > max_y; }
  void expand(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const Box& b) {
    min_x = std::min(min_x, b.min_x);
    min_y = std::min(min_y, b.min_y);
    max_x = std::max(max_x, b.max_x);
    max_y = std::max(max_y, b.max_y);
  }
  Box inflated(double d) const { return {min_x - d, min_y - d, max_x + d, max_y + d}; }
  bool intersects(const Box& b) const {
    return !(b.min_x > max_x || b.max_x < min_x || b.min_y > max_y || b.max_y < min_y);
  }
  bool contains(Point2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  Point2 center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
  /// Euclidean distance from p to the box (0 inside).
  double distance_to(Point2 p) const {
    const double dx = std::max({min_x - p.x, 0.0, p.x - max_x});
    const double dy = std::max({min_y - p.y, 0.0, p.y - max_y});
    return std::hypot(dx, dy);
  }
};

/// A closed ring: front() == back(). Most functions accept the closed form;
/// `open_vertices` drops the repeated closing point.
using Ring = std::vector<Point2>;

inline std::span<const Point2> open_vertices(const Ring& ring) {
  if (ring.size() >= 2 && ring.front() == ring.back()) {
    return {ring.data(), ring.size() - 1};
  }
  return {ring.data(), ring.size()};
}

struct Polygon {
  Ring exterior;
  std::vector<Ring> holes;
};

/// Signed shoelace area of a ring (closed or open); > 0 for counter-clockwise.
double signed_area(std::span<const Point2> ring);
double ring_length(const Ring& ring);
double polygon_area(const Polygon& poly);
double polygon_perimeter(const Polygon& poly);
/// Area centroid (holes subtracted). Falls back to the vertex mean for
/// zero-area input.
Point2 polygon_centroid(const Polygon& poly);
Box bounding_box(std::span<const Point2> pts);

/// Even-odd ray-crossing test against a closed ring. Boundary points may go
/// either way; use `on_ring_boundary` when that matters.
bool point_in_ring(Point2 p, const Ring& ring);
bool point_in_polygon(Point2 p, const Polygon& poly);
bool on_ring_boundary(Point2 p, const Ring& ring, double tol);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
/// Parameter t in [0,1] of the closest point on ab to p.
double project_onto_segment(Point2 p, Point2 a, Point2 b);
double point_polyline_distance(Point2 p, std::span<const Point2> line);

/// Result of intersecting two closed segments.
struct SegmentIntersection {
  enum class Kind { none, point, overlap } kind = Kind::none;
  // For `point`: params on each segment. For `overlap`: the two overlap
  // endpoints expressed as params on each segment (t0/t1 on the first,
  // u0/u1 on the second).
  double t0 = 0, t1 = 0, u0 = 0, u1 = 0;
  Point2 p0, p1;
};
/// `tol` (metres) is the distance under which points count as touching.
SegmentIntersection intersect_segments(Point2 a, Point2 b, Point2 c, Point2 d, double tol = 1e-9);

/// Ray origin + t*dir (t > 0) against segment ab. Returns t of the nearest
/// contact, including grazing collinear contact.
std::optional<double> ray_segment_hit(Point2 origin, Point2 dir, Point2 a, Point2 b);

/// True when two non-adjacent edges of the ring touch or cross.
bool ring_self_intersects(const Ring& ring);

/// Returns the ring with its vertex order reversed (closure preserved).
Ring reversed(const Ring& ring);

}  // namespace osmheight::geodata
