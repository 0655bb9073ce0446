// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "osmheight/geodata/geometry.hpp"

namespace osmheight::geodata {

/// WGS84 longitude/latitude in degrees.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  bool valid() const { return lon >= -180.0 && lon <= 180.0 && lat >= -90.0 && lat <= 90.0; }
  friend bool operator==(GeoPoint, GeoPoint) = default;
};

/// Spherical azimuthal-equidistant projection about a fixed origin. Distances
/// and bearings from the origin are preserved exactly on the sphere.
class LocalProjection {
 public:
  static constexpr double kEarthRadius = 6371008.8;   // IUGG mean radius, m
  static constexpr double kMaxRange = 100000.0;       // m

  explicit LocalProjection(GeoPoint origin);

  /// Origin at the centre of the bounding box of `points`.
  static LocalProjection centered_on(std::span<const GeoPoint> points);

  GeoPoint origin() const { return origin_; }

  /// Throws ProjectionError for invalid coordinates or points farther than
  /// kMaxRange from the origin.
  Point2 project(GeoPoint p) const;
  GeoPoint unproject(Point2 p) const;

 private:
  GeoPoint origin_;
  // Unit vectors of the origin and its local east/north tangent basis.
  double o_[3];
  double east_[3];
  double north_[3];
};

}  // namespace osmheight::geodata
