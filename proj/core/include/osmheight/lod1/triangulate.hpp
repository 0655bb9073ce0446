// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "osmheight/geodata/geometry.hpp"

namespace osmheight::lod1 {

using Triangle = std::array<std::size_t, 3>;

/// Ear-clipping triangulation of a polygon with holes. Indices refer to the
/// open vertices of the exterior followed by those of each hole, in order.
/// Triangles are counter-clockwise. A polygon with n vertices in total and h
/// holes yields n + 2h - 2 triangles. Throws ExportError when no ear can be
/// found (self-touching or degenerate input).
std::vector<Triangle> triangulate(const geodata::Polygon& poly);

}  // namespace osmheight::lod1
