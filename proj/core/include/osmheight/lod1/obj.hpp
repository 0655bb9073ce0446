// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "osmheight/lod1/cityjson.hpp"
#include "osmheight/lod1/triangulate.hpp"

namespace osmheight::lod1 {

/// Wavefront OBJ text: one `o <building_id>` group per solid, its vertices,
/// then triangles with outward normals. Throws ExportError naming the
/// building when a cap cannot be triangulated.
std::string to_obj(const CityModel& model);
void export_obj(const CityModel& model, const std::filesystem::path& path);

struct ObjObject {
  std::string name;
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;  // indices into this object's vertices
};

/// Reads `o`, `v` and triangular `f` records. Throws InputError otherwise.
std::vector<ObjObject> parse_obj(const std::string& text);
std::vector<ObjObject> read_obj(const std::filesystem::path& path);

}  // namespace osmheight::lod1
