// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/morphometry/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "osmheight/geodata/spatial_index.hpp"

namespace osmheight::morphometry {

using geodata::Point2;

namespace {

constexpr double kMinFaceArea = 1e-9;

// Drops A-B-A reversals (dangling spurs walked out and back) from a cyclic
// vertex list.
std::vector<Point2> remove_spurs(std::vector<Point2> pts) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size() && pts.size() >= 3; ++i) {
      const std::size_t n = pts.size();
      const Point2 prev = pts[(i + n - 1) % n];
      const Point2 next = pts[(i + 1) % n];
      if (geodata::distance(prev, next) <= 1e-9) {
        // Remove pts[i] and pts[i+1] (the duplicate of prev).
        const std::size_t a = i, b = (i + 1) % n;
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(std::min(a, b)));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

}  // namespace

std::vector<Block> extract_faces(const geodata::StreetNetwork& net) {
  const auto& g = net.graph;
  const std::size_t n_half = 2 * g.edges.size();

  auto origin = [&](std::size_t h) { return h % 2 == 0 ? g.edges[h / 2].u : g.edges[h / 2].v; };
  auto dest = [&](std::size_t h) { return h % 2 == 0 ? g.edges[h / 2].v : g.edges[h / 2].u; };
  auto angle = [&](std::size_t h) {
    const auto& pl = g.edges[h / 2].polyline;
    const Point2 d = h % 2 == 0 ? pl[1] - pl[0] : pl[pl.size() - 2] - pl.back();
    return std::atan2(d.y, d.x);
  };

  // Outgoing half-edges per node sorted counter-clockwise.
  std::vector<std::vector<std::size_t>> out(g.nodes.size());
  for (std::size_t h = 0; h < n_half; ++h) out[origin(h)].push_back(h);
  std::vector<std::size_t> slot(n_half);
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      const double aa = angle(a), ab = angle(b);
      return aa < ab || (aa == ab && a < b);
    });
    for (std::size_t k = 0; k < list.size(); ++k) slot[list[k]] = k;
  }
  auto next = [&](std::size_t h) {
    const std::size_t twin = h ^ 1u;
    const auto& list = out[dest(h)];
    return list[(slot[twin] + list.size() - 1) % list.size()];
  };

  std::vector<Block> blocks;
  std::vector<char> visited(n_half, 0);
  for (std::size_t start = 0; start < n_half; ++start) {
    if (visited[start]) continue;
    std::vector<Point2> pts;
    std::size_t h = start;
    while (!visited[h]) {
      visited[h] = 1;
      const auto& pl = g.edges[h / 2].polyline;
      if (h % 2 == 0) {
        pts.insert(pts.end(), pl.begin(), pl.end() - 1);
      } else {
        pts.insert(pts.end(), pl.rbegin(), pl.rend() - 1);
      }
      h = next(h);
    }
    if (geodata::signed_area(pts) <= kMinFaceArea) continue;
    pts = remove_spurs(std::move(pts));
    if (pts.size() < 3) continue;
    pts.push_back(pts.front());
    Block b;
    b.id = "block-" + std::to_string(blocks.size());
    b.polygon.exterior = std::move(pts);
    b.area = geodata::polygon_area(b.polygon);
    b.centroid = geodata::polygon_centroid(b.polygon);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

BlockPartition tessellate_blocks(const geodata::StreetNetwork& net,
                                 std::span<const geodata::Footprint> footprints) {
  BlockPartition part;
  part.blocks = extract_faces(net);
  part.membership.assign(footprints.size(), std::nullopt);

  std::vector<geodata::Box> boxes;
  std::vector<Point2> points;
  for (const auto& b : part.blocks) {
    boxes.push_back(geodata::bounding_box(b.polygon.exterior));
    points.push_back(b.centroid);
  }
  const geodata::SpatialIndex index(std::move(boxes), std::move(points));

  for (std::size_t i = 0; i < footprints.size(); ++i) {
    const Point2 c = footprints[i].centroid;
    geodata::Box probe;
    probe.expand(c);
    std::optional<std::size_t> best;
    for (std::size_t bi : index.query(probe)) {
      if (!geodata::point_in_ring(c, part.blocks[bi].polygon.exterior)) continue;
      if (!best || part.blocks[bi].area < part.blocks[*best].area) best = bi;
    }
    part.membership[i] = best;
    if (best) {
      part.blocks[*best].buildings.push_back(i);
      part.blocks[*best].building_ids.push_back(footprints[i].id);
    } else {
      part.unbounded.push_back(i);
    }
  }
  return part;
}

}  // namespace osmheight::morphometry
