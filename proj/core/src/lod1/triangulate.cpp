// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/lod1/triangulate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "osmheight/errors.hpp"

namespace osmheight::lod1 {

using geodata::Point2;
using geodata::orient;

namespace {

bool same(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

bool in_cone(const std::vector<Point2>& pts, const std::vector<std::size_t>& loop,
             std::size_t k, Point2 m) {
  const std::size_t n = loop.size();
  const Point2 prev = pts[loop[(k + n - 1) % n]];
  const Point2 p = pts[loop[k]];
  const Point2 next = pts[loop[(k + 1) % n]];
  if (orient(prev, p, next) >= 0.0) {
    return orient(prev, p, m) > 0.0 && orient(p, next, m) > 0.0;
  }
  return orient(prev, p, m) > 0.0 || orient(p, next, m) > 0.0;
}

bool blocked(const std::vector<Point2>& pts, const std::vector<std::vector<std::size_t>>& loops,
             Point2 m, Point2 p) {
  for (const auto& loop : loops) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Point2 a = pts[loop[i]];
      const Point2 b = pts[loop[(i + 1) % loop.size()]];
      if (same(a, p) || same(b, p) || same(a, m) || same(b, m)) continue;
      if (geodata::intersect_segments(m, p, a, b).kind !=
          geodata::SegmentIntersection::Kind::none) {
        return true;
      }
    }
  }
  return false;
}

// Splices each hole into the outer loop through a visible bridge, rightmost
// holes first.
std::vector<std::size_t> merge_holes(const std::vector<Point2>& pts,
                                     std::vector<std::size_t> outer,
                                     std::vector<std::vector<std::size_t>> holes) {
  auto rightmost = [&](const std::vector<std::size_t>& h) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < h.size(); ++i) {
      const Point2 a = pts[h[i]], b = pts[h[best]];
      if (a.x > b.x || (a.x == b.x && a.y < b.y)) best = i;
    }
    return best;
  };
  std::vector<std::size_t> order(holes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return pts[holes[l][rightmost(holes[l])]].x > pts[holes[r][rightmost(holes[r])]].x;
  });

  std::vector<bool> merged(holes.size(), false);
  for (std::size_t hi : order) {
    const auto& hole = holes[hi];
    const std::size_t mi = rightmost(hole);
    const Point2 m = pts[hole[mi]];

    std::vector<std::vector<std::size_t>> obstacles{outer};
    for (std::size_t j = 0; j < holes.size(); ++j) {
      if (!merged[j]) obstacles.push_back(holes[j]);
    }

    std::size_t best = outer.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < outer.size(); ++k) {
      const Point2 p = pts[outer[k]];
      const double d = geodata::distance(p, m);
      if (d >= best_d || d == 0.0) continue;
      if (!in_cone(pts, outer, k, m)) continue;
      if (blocked(pts, obstacles, m, p)) continue;
      best = k;
      best_d = d;
    }
    if (best == outer.size()) throw ExportError("no bridge from hole to exterior");

    std::vector<std::size_t> out(outer.begin(), outer.begin() + static_cast<long>(best) + 1);
    for (std::size_t i = 0; i <= hole.size(); ++i) out.push_back(hole[(mi + i) % hole.size()]);
    out.insert(out.end(), outer.begin() + static_cast<long>(best), outer.end());
    outer = std::move(out);
    merged[hi] = true;
  }
  return outer;
}

bool inside_or_on(Point2 p, Point2 a, Point2 b, Point2 c) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

bool is_ear(const std::vector<Point2>& pts, const std::vector<std::size_t>& loop,
            std::size_t i, bool allow_flat) {
  const std::size_t n = loop.size();
  const Point2 a = pts[loop[(i + n - 1) % n]];
  const Point2 b = pts[loop[i]];
  const Point2 c = pts[loop[(i + 1) % n]];
  const double o = orient(a, b, c);
  if (o < 0.0 || (o == 0.0 && !allow_flat)) return false;
  if (o == 0.0) return geodata::dot(b - a, c - b) > 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Point2 p = pts[loop[j]];
    if (same(p, a) || same(p, b) || same(p, c)) continue;
    if (inside_or_on(p, a, b, c)) return false;
  }
  return true;
}

}  // namespace

std::vector<Triangle> triangulate(const geodata::Polygon& poly) {
  std::vector<Point2> pts;
  std::vector<std::size_t> outer;
  std::vector<std::vector<std::size_t>> holes;
  for (const auto& p : geodata::open_vertices(poly.exterior)) {
    outer.push_back(pts.size());
    pts.push_back(p);
  }
  for (const auto& h : poly.holes) {
    holes.emplace_back();
    for (const auto& p : geodata::open_vertices(h)) {
      holes.back().push_back(pts.size());
      pts.push_back(p);
    }
  }
  if (outer.size() < 3) throw ExportError("polygon has fewer than three vertices");
  const double area = geodata::signed_area(poly.exterior);
  if (area == 0.0) throw ExportError("polygon has zero area");
  if (area < 0.0) std::reverse(outer.begin(), outer.end());

  std::vector<std::size_t> loop = merge_holes(pts, std::move(outer), std::move(holes));
  std::vector<Triangle> tris;
  tris.reserve(loop.size());
  while (loop.size() > 3) {
    std::size_t ear = loop.size();
    for (std::size_t i = 0; i < loop.size() && ear == loop.size(); ++i) {
      if (is_ear(pts, loop, i, false)) ear = i;
    }
    // Collinear runs leave only flat ears; clipping them keeps the mesh
    // closed.
    for (std::size_t i = 0; i < loop.size() && ear == loop.size(); ++i) {
      if (is_ear(pts, loop, i, true)) ear = i;
    }
    if (ear == loop.size()) throw ExportError("ear clipping found no ear");
    const std::size_t n = loop.size();
    tris.push_back({loop[(ear + n - 1) % n], loop[ear], loop[(ear + 1) % n]});
    loop.erase(loop.begin() + static_cast<long>(ear));
  }
  tris.push_back({loop[0], loop[1], loop[2]});
  return tris;
}

}  // namespace osmheight::lod1
