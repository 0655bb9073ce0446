// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/geodata/projection.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "osmheight/errors.hpp"

namespace osmheight::geodata {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void unit_vector(GeoPoint p, double out[3]) {
  const double lat = p.lat * kDeg, lon = p.lon * kDeg;
  out[0] = std::cos(lat) * std::cos(lon);
  out[1] = std::cos(lat) * std::sin(lon);
  out[2] = std::sin(lat);
}

double dot3(const double a[3], const double b[3]) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

LocalProjection::LocalProjection(GeoPoint origin) : origin_(origin) {
  if (!origin.valid()) throw ProjectionError("projection origin outside WGS84 range");
  const double lat = origin.lat * kDeg, lon = origin.lon * kDeg;
  unit_vector(origin, o_);
  east_[0] = -std::sin(lon);
  east_[1] = std::cos(lon);
  east_[2] = 0.0;
  north_[0] = -std::sin(lat) * std::cos(lon);
  north_[1] = -std::sin(lat) * std::sin(lon);
  north_[2] = std::cos(lat);
}

LocalProjection LocalProjection::centered_on(std::span<const GeoPoint> points) {
  if (points.empty()) throw ProjectionError("cannot centre a projection on zero points");
  double min_lon = points[0].lon, max_lon = points[0].lon;
  double min_lat = points[0].lat, max_lat = points[0].lat;
  for (const auto& p : points) {
    min_lon = std::min(min_lon, p.lon);
    max_lon = std::max(max_lon, p.lon);
    min_lat = std::min(min_lat, p.lat);
    max_lat = std::max(max_lat, p.lat);
  }
  return LocalProjection({0.5 * (min_lon + max_lon), 0.5 * (min_lat + max_lat)});
}

Point2 LocalProjection::project(GeoPoint p) const {
  if (!p.valid()) {
    throw ProjectionError("coordinate outside WGS84 range: " + std::to_string(p.lon) + ", " +
                          std::to_string(p.lat));
  }
  double v[3];
  unit_vector(p, v);
  const double e = dot3(v, east_);
  const double n = dot3(v, north_);
  const double sin_c = std::hypot(e, n);
  const double cos_c = dot3(v, o_);
  const double c = std::atan2(sin_c, cos_c);
  const double rho = kEarthRadius * c;
  if (rho > kMaxRange) {
    throw ProjectionError("point " + std::to_string(rho / 1000.0) +
                          " km from projection origin exceeds range");
  }
  if (sin_c == 0.0) return {0.0, 0.0};
  return {rho * e / sin_c, rho * n / sin_c};
}

GeoPoint LocalProjection::unproject(Point2 p) const {
  const double rho = std::hypot(p.x, p.y);
  if (rho > kMaxRange) throw ProjectionError("planar point exceeds projection range");
  if (rho == 0.0) return origin_;
  const double c = rho / kEarthRadius;
  const double sc = std::sin(c), cc = std::cos(c);
  double v[3];
  for (int k = 0; k < 3; ++k) {
    v[k] = cc * o_[k] + sc * (p.x / rho * east_[k] + p.y / rho * north_[k]);
  }
  const double lat = std::atan2(v[2], std::hypot(v[0], v[1])) / kDeg;
  const double lon = std::atan2(v[1], v[0]) / kDeg;
  return {lon, lat};
}

}  // namespace osmheight::geodata
