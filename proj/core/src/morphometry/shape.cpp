// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/morphometry/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace osmheight::morphometry {

using geodata::cross;
using geodata::distance;
using geodata::dot;
using geodata::open_vertices;

std::vector<Point2> convex_hull(std::span<const Point2> input) {
  std::vector<Point2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && geodata::orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2 p = pts[i];
    while (k >= lower && geodata::orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

constexpr double kCircleEps = 1e-10;

bool covers(const Circle& c, Point2 p) {
  return distance(c.center, p) <= c.radius * (1.0 + kCircleEps) + 1e-12;
}

Circle circle_from(Point2 a, Point2 b) {
  return {0.5 * (a + b), 0.5 * distance(a, b)};
}

Circle circle_from(Point2 a, Point2 b, Point2 c) {
  const Point2 ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  if (std::abs(d) < 1e-300) {
    // Collinear: the widest pair spans the circle.
    Circle best = circle_from(a, b);
    for (const Circle& cand : {circle_from(a, c), circle_from(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  const Point2 off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + off, geodata::norm(off)};
}

}  // namespace

Circle min_enclosing_circle(std::span<const Point2> input) {
  const std::vector<Point2> pts = convex_hull(input);
  if (pts.empty()) return {};
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (covers(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (covers(c, pts[j])) continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!covers(c, pts[k])) c = circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

OrientedRect min_area_rect(std::span<const Point2> input) {
  const std::vector<Point2> hull = convex_hull(input);
  OrientedRect best;
  if (hull.size() < 2) return best;
  // Rounding-level ties are common (every edge of an acute triangle gives
  // the same area), so ties fall to the smaller perimeter and then the
  // smaller cardinal deviation. Both are invariant under quarter turns.
  auto better = [](const OrientedRect& a, const OrientedRect& b) {
    constexpr double kRel = 1e-9;
    auto differ = [](double x, double y) {
      return std::abs(x - y) > kRel * std::max({1.0, std::abs(x), std::abs(y)});
    };
    if (differ(a.area(), b.area())) return a.area() < b.area();
    if (differ(a.perimeter(), b.perimeter())) return a.perimeter() < b.perimeter();
    return cardinal_deviation(a.axis_deg) < cardinal_deviation(b.axis_deg) - kRel;
  };
  bool have = false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 e = hull[(i + 1) % hull.size()] - hull[i];
    const double len = geodata::norm(e);
    if (len == 0.0) continue;
    const Point2 u{e.x / len, e.y / len};
    const Point2 v{-u.y, u.x};
    double lo_u = 0, hi_u = 0, lo_v = 0, hi_v = 0;
    for (const auto& p : hull) {
      const Point2 d = p - hull[i];
      lo_u = std::min(lo_u, dot(d, u));
      hi_u = std::max(hi_u, dot(d, u));
      lo_v = std::min(lo_v, dot(d, v));
      hi_v = std::max(hi_v, dot(d, v));
    }
    const double su = hi_u - lo_u, sv = hi_v - lo_v;
    const bool u_long = su >= sv;
    const Point2 axis = u_long ? u : v;
    OrientedRect r;
    r.length = u_long ? su : sv;
    r.width = u_long ? sv : su;
    r.axis_deg = std::fmod(std::atan2(axis.y, axis.x) * 180.0 / std::numbers::pi + 360.0, 180.0);
    if (!have || better(r, best)) {
      best = r;
      have = true;
    }
  }
  return best;
}

double cardinal_deviation(double axis_deg) {
  double a = std::fmod(std::fmod(axis_deg, 90.0) + 90.0, 90.0);
  return std::min(a, 90.0 - a);
}

int corner_count(const Ring& ring, double threshold_deg) {
  const auto v = open_vertices(ring);
  const std::size_t n = v.size();
  if (n < 3) return 0;
  const double threshold = threshold_deg * std::numbers::pi / 180.0;
  int corners = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 in = v[i] - v[(i + n - 1) % n];
    const Point2 out = v[(i + 1) % n] - v[i];
    const double turn = std::atan2(std::abs(cross(in, out)), dot(in, out));
    if (turn > threshold) ++corners;
  }
  return corners;
}

ShapeMetrics shape_metrics(const Polygon& poly) {
  ShapeMetrics m;
  m.area = geodata::polygon_area(poly);
  m.perimeter = geodata::polygon_perimeter(poly);
  const auto ext = open_vertices(poly.exterior);
  const Circle mec = min_enclosing_circle(ext);
  const double mec_area = std::numbers::pi * mec.radius * mec.radius;
  m.circular_compactness = mec_area > 0 ? m.area / mec_area : 0.0;
  const double hull_area = std::abs(geodata::signed_area(convex_hull(ext)));
  m.convexity = hull_area > 0 ? m.area / hull_area : 0.0;
  const OrientedRect rect = min_area_rect(ext);
  m.orientation = cardinal_deviation(rect.axis_deg);
  m.corner_count = corner_count(poly.exterior);
  m.longest_axis_length = 2.0 * mec.radius;
  m.equivalent_rectangular_index =
      (rect.area() > 0 && m.perimeter > 0)
          ? std::sqrt(m.area / rect.area()) * rect.perimeter() / m.perimeter
          : 0.0;
  return m;
}

namespace {

// Overlap length of segment cd with segment ab when cd lies on ab's line.
double collinear_overlap(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const Point2 ab = b - a;
  const double len = geodata::norm(ab);
  if (len == 0.0) return 0.0;
  if (std::abs(cross(ab, c - a)) / len > tol || std::abs(cross(ab, d - a)) / len > tol) {
    return 0.0;
  }
  const double tc = dot(c - a, ab) / len;
  const double td = dot(d - a, ab) / len;
  const double lo = std::max(0.0, std::min(tc, td));
  const double hi = std::min(len, std::max(tc, td));
  return std::max(0.0, hi - lo);
}

void for_each_edge(const geodata::Footprint& f, auto&& fn) {
  auto ring_edges = [&](const Ring& r) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) fn(r[i], r[i + 1]);
  };
  ring_edges(f.exterior());
  for (const auto& h : f.holes()) ring_edges(h);
}

}  // namespace

double shared_wall_length(const geodata::Footprint& subject,
                          std::span<const geodata::Footprint* const> others, double tol) {
  double total = 0.0;
  for (const auto* other : others) {
    if (other == &subject || !subject.bbox.inflated(tol).intersects(other->bbox)) continue;
    for_each_edge(subject, [&](Point2 a, Point2 b) {
      for_each_edge(*other, [&](Point2 c, Point2 d) { total += collinear_overlap(a, b, c, d, tol); });
    });
  }
  return total;
}

}  // namespace osmheight::morphometry
