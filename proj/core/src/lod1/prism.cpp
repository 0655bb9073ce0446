// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/lod1/prism.hpp"

#include <cmath>

#include "osmheight/errors.hpp"

namespace osmheight::lod1 {

PrismSolid extrude(const geodata::Footprint& f, double height, double min_height) {
  if (!std::isfinite(height) || height < min_height) {
    throw DomainError("building " + f.id + ": height " + std::to_string(height) +
                      " m is below the minimum of " + std::to_string(min_height) + " m");
  }
  PrismSolid s;
  s.building_id = f.id;
  s.footprint = f.polygon;
  s.height = height;

  std::vector<std::span<const geodata::Point2>> rings;
  rings.push_back(geodata::open_vertices(f.exterior()));
  for (const auto& h : f.holes()) rings.push_back(geodata::open_vertices(h));

  std::size_t n = 0;
  for (const auto& r : rings) n += r.size();
  s.vertices.resize(2 * n);

  std::vector<std::size_t> offset;
  std::size_t off = 0;
  for (const auto& r : rings) {
    offset.push_back(off);
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.vertices[off + i] = {r[i].x, r[i].y, 0.0};
      s.vertices[n + off + i] = {r[i].x, r[i].y, height};
    }
    off += r.size();
  }

  Face bottom, top;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    std::vector<std::size_t> lo, hi;
    for (std::size_t i = 0; i < rings[k].size(); ++i) {
      hi.push_back(n + offset[k] + i);
      lo.push_back(offset[k] + rings[k].size() - 1 - i);
    }
    bottom.push_back(std::move(lo));
    top.push_back(std::move(hi));
  }
  s.faces.push_back(std::move(bottom));
  s.faces.push_back(std::move(top));

  // Exterior is CCW and holes CW, so the solid lies to the left of every
  // edge and (a0, b0, b1, a1) faces outward.
  for (std::size_t k = 0; k < rings.size(); ++k) {
    const std::size_t m = rings[k].size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t a = offset[k] + i;
      const std::size_t b = offset[k] + (i + 1) % m;
      s.faces.push_back({{a, b, n + b, n + a}});
    }
  }
  return s;
}

}  // namespace osmheight::lod1
