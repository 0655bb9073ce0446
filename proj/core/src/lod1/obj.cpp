// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/lod1/obj.hpp"

#include <sstream>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/morphometry/manifest.hpp"

namespace osmheight::lod1 {

using morphometry::format_double;

std::string to_obj(const CityModel& model) {
  if (model.empty()) throw ExportError("cannot export an empty city model");
  std::string out = "# osmheight LoD1\n";
  std::size_t base = 1;
  for (const auto& s : model.solids) {
    std::vector<Triangle> cap;
    try {
      cap = triangulate(s.footprint);
    } catch (const ExportError& e) {
      throw ExportError("building " + s.building_id + ": " + e.what());
    }
    const std::size_t n = s.vertices.size() / 2;
    out += "o " + s.building_id + "\n";
    for (const auto& v : s.vertices) {
      out += "v " + format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z) + "\n";
    }
    auto face = [&](std::size_t a, std::size_t b, std::size_t c) {
      out += "f " + std::to_string(base + a) + " " + std::to_string(base + b) + " " +
             std::to_string(base + c) + "\n";
    };
    for (const auto& t : cap) face(t[0], t[2], t[1]);
    for (const auto& t : cap) face(n + t[0], n + t[1], n + t[2]);
    for (std::size_t w = 2; w < s.faces.size(); ++w) {
      const auto& q = s.faces[w][0];
      face(q[0], q[1], q[2]);
      face(q[0], q[2], q[3]);
    }
    base += s.vertices.size();
  }
  return out;
}

void export_obj(const CityModel& model, const std::filesystem::path& path) {
  write_text_file(path, to_obj(model));
}

std::vector<ObjObject> parse_obj(const std::string& text) {
  std::vector<ObjObject> objects;
  std::vector<Point3> all;
  std::size_t first = 0;  // global index of the current object's first vertex
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      return InputError("OBJ line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "o") {
      objects.emplace_back();
      ls >> objects.back().name;
      first = all.size();
    } else if (tag == "v") {
      Point3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw fail("bad vertex");
      all.push_back(p);
      if (objects.empty()) objects.emplace_back();
      objects.back().vertices.push_back(p);
    } else if (tag == "f") {
      Triangle t;
      for (auto& i : t) {
        std::string tok;
        if (!(ls >> tok)) throw fail("face is not a triangle");
        const long long k = std::stoll(tok.substr(0, tok.find('/')));
        if (k < 1 || static_cast<std::size_t>(k) > all.size() ||
            static_cast<std::size_t>(k) - 1 < first) {
          throw fail("face index outside the current object");
        }
        i = static_cast<std::size_t>(k) - 1 - first;
      }
      std::string extra;
      if (ls >> extra) throw fail("face is not a triangle");
      if (objects.empty()) throw fail("face before any vertex");
      objects.back().triangles.push_back(t);
    }
  }
  return objects;
}

std::vector<ObjObject> read_obj(const std::filesystem::path& path) {
  return parse_obj(read_text_file(path));
}

}  // namespace osmheight::lod1
