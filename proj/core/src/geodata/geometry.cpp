// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/geodata/geometry.hpp"

namespace osmheight::geodata {
namespace {

constexpr double kParamEps = 1e-12;
constexpr double kCollinearTol = 1e-9;  // metres

}  // namespace

double signed_area(std::span<const Point2> ring) {
  if (ring.size() < 3) return 0.0;
  // Shoelace about the first vertex keeps the sum well conditioned far from
  // the origin.
  const Point2 o = ring.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    twice += cross(ring[i] - o, ring[i + 1] - o);
  }
  return 0.5 * twice;
}

double ring_length(const Ring& ring) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) len += distance(ring[i], ring[i + 1]);
  return len;
}

double polygon_area(const Polygon& poly) {
  double a = std::abs(signed_area(poly.exterior));
  for (const auto& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

double polygon_perimeter(const Polygon& poly) {
  double p = ring_length(poly.exterior);
  for (const auto& h : poly.holes) p += ring_length(h);
  return p;
}

namespace {

// Returns (signed area, area-weighted centroid numerators) about origin `o`.
void accumulate_centroid(const Ring& ring, Point2 o, double sign, double& area,
                         double& cx, double& cy) {
  const auto v = open_vertices(ring);
  const double s = signed_area(v) >= 0 ? sign : -sign;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 p = v[i] - o;
    const Point2 q = v[(i + 1) % v.size()] - o;
    const double c = cross(p, q);
    area += s * 0.5 * c;
    cx += s * (p.x + q.x) * c / 6.0;
    cy += s * (p.y + q.y) * c / 6.0;
  }
}

}  // namespace

Point2 polygon_centroid(const Polygon& poly) {
  if (poly.exterior.empty()) return {};
  const Point2 o = poly.exterior.front();
  double area = 0, cx = 0, cy = 0;
  accumulate_centroid(poly.exterior, o, 1.0, area, cx, cy);
  for (const auto& h : poly.holes) accumulate_centroid(h, o, -1.0, area, cx, cy);
  if (std::abs(area) < 1e-300) {
    const auto v = open_vertices(poly.exterior);
    Point2 m{};
    for (const auto& p : v) m = m + p;
    return (1.0 / static_cast<double>(v.size())) * m;
  }
  return {o.x + cx / area, o.y + cy / area};
}

Box bounding_box(std::span<const Point2> pts) {
  Box b;
  for (const auto& p : pts) b.expand(p);
  return b;
}

bool point_in_ring(Point2 p, const Ring& ring) {
  bool inside = false;
  const auto v = open_vertices(ring);
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Point2 a = v[i];
    const Point2 b = v[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool point_in_polygon(Point2 p, const Polygon& poly) {
  if (!point_in_ring(p, poly.exterior)) return false;
  for (const auto& h : poly.holes) {
    if (point_in_ring(p, h)) return false;
  }
  return true;
}

bool on_ring_boundary(Point2 p, const Ring& ring, double tol) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (point_segment_distance(p, ring[i], ring[i + 1]) <= tol) return true;
  }
  return false;
}

double project_onto_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const double t = project_onto_segment(p, a, b);
  return distance(p, a + t * (b - a));
}

double point_polyline_distance(Point2 p, std::span<const Point2> line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

SegmentIntersection intersect_segments(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  SegmentIntersection out;
  const Point2 r = b - a;
  const Point2 s = d - c;
  const Point2 qp = c - a;
  const double rr = dot(r, r);
  const double ss = dot(s, s);
  if (rr == 0.0 || ss == 0.0) return out;
  const double denom = cross(r, s);
  const double rlen = std::sqrt(rr);

  auto snap = [tol](Point2 p, Point2 e0, Point2 e1) {
    if (distance(p, e0) <= tol) return e0;
    if (distance(p, e1) <= tol) return e1;
    return p;
  };

  // Rounding alone puts collinear points ~1e-14 off the line, so a zero
  // tolerance still needs a relative floor here.
  const double line_tol = std::max(tol, kParamEps * std::max(rlen, std::sqrt(ss)));
  if (std::abs(denom) <= kParamEps * std::sqrt(rr * ss) &&
      std::abs(cross(r, qp)) / rlen <= line_tol) {
    // Collinear: work in params along ab.
    const double tc = dot(c - a, r) / rr;
    const double td = dot(d - a, r) / rr;
    const double lo = std::max(0.0, std::min(tc, td));
    const double hi = std::min(1.0, std::max(tc, td));
    const double tol_t = tol / rlen;
    if (lo > hi + tol_t) return out;
    auto u_of = [&](Point2 p) { return std::clamp(dot(p - c, s) / ss, 0.0, 1.0); };
    out.p0 = snap(snap(a + lo * r, a, b), c, d);
    out.p1 = snap(snap(a + hi * r, a, b), c, d);
    out.t0 = lo;
    out.t1 = std::max(lo, hi);
    out.u0 = u_of(out.p0);
    out.u1 = u_of(out.p1);
    if (distance(out.p0, out.p1) <= tol) {
      out.kind = SegmentIntersection::Kind::point;
      out.p1 = out.p0;
      out.t1 = out.t0;
      out.u1 = out.u0;
    } else {
      out.kind = SegmentIntersection::Kind::overlap;
    }
    return out;
  }
  if (denom == 0.0) return out;  // parallel, disjoint

  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  if (t < -kParamEps || t > 1 + kParamEps || u < -kParamEps || u > 1 + kParamEps) {
    // Near-miss at an endpoint within the collinear tolerance still counts as
    // a touch so noding never leaves hairline gaps.
    const Point2 ends[4] = {a, b, c, d};
    for (int k = 0; k < 4; ++k) {
      const bool from_second = k >= 2;
      const Point2 e = ends[k];
      const double dist =
          from_second ? point_segment_distance(e, a, b) : point_segment_distance(e, c, d);
      if (dist <= tol) {
        out.kind = SegmentIntersection::Kind::point;
        out.p0 = out.p1 = e;
        out.t0 = out.t1 = from_second ? project_onto_segment(e, a, b) : (k == 0 ? 0.0 : 1.0);
        out.u0 = out.u1 = from_second ? (k == 2 ? 0.0 : 1.0) : project_onto_segment(e, c, d);
        return out;
      }
    }
    return out;
  }
  const double tc = std::clamp(t, 0.0, 1.0);
  const double uc = std::clamp(u, 0.0, 1.0);
  out.kind = SegmentIntersection::Kind::point;
  out.p0 = out.p1 = snap(snap(a + tc * r, a, b), c, d);
  out.t0 = out.t1 = tc;
  out.u0 = out.u1 = uc;
  return out;
}

std::optional<double> ray_segment_hit(Point2 origin, Point2 dir, Point2 a, Point2 b) {
  const Point2 s = b - a;
  const Point2 qp = a - origin;
  const double denom = cross(dir, s);
  const double dlen2 = dot(dir, dir);
  const double slen = norm(s);
  if (std::abs(denom) <= 1e-15 * std::sqrt(dlen2) * slen) {
    if (std::abs(cross(qp, dir)) / std::sqrt(dlen2) > kCollinearTol) return std::nullopt;
    const double ta = dot(a - origin, dir) / dlen2;
    const double tb = dot(b - origin, dir) / dlen2;
    const double lo = std::min(ta, tb);
    if (lo > 0.0) return lo;
    return std::nullopt;  // behind, or origin lies on the segment
  }
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, dir) / denom;
  if (t <= 0.0 || u < -kParamEps || u > 1.0 + kParamEps) return std::nullopt;
  return t;
}

bool ring_self_intersects(const Ring& ring) {
  const auto v = open_vertices(ring);
  const std::size_t n = v.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i], b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = v[j], d = v[(j + 1) % n];
      const auto hit = intersect_segments(a, b, c, d);
      if (hit.kind == SegmentIntersection::Kind::none) continue;
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (!adjacent) return true;
      // Adjacent edges share one vertex; anything more is a fold-back.
      if (hit.kind == SegmentIntersection::Kind::overlap) return true;
    }
  }
  return false;
}

Ring reversed(const Ring& ring) { return Ring(ring.rbegin(), ring.rend()); }

}  // namespace osmheight::geodata
