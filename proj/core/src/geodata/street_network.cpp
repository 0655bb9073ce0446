// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/geodata/street_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

#include "osmheight/errors.hpp"
#include "osmheight/geodata/footprint.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::geodata {

using nlohmann::json;

double StreetSegment::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) len += distance(polyline[i], polyline[i + 1]);
  return len;
}

std::size_t StreetGraph::degree(std::size_t node) const { return incident[node].size(); }

namespace {

// Projected lon/lat carry rounding noise above the ring tolerance; street
// ends this close to another street are snapped onto it.
constexpr double kTol = kStreetSnapTolerance;

struct Piece {
  std::size_t seg;
  std::size_t idx;  // position within the segment polyline
  Point2 a, b;
  Box box;
};

struct Split {
  double t;
  Point2 p;
  bool node;
};

// Merges points closer than kTol into one node id.
class NodeRegistry {
 public:
  std::size_t intern(Point2 p, std::vector<Point2>& nodes) {
    const auto key = cell_of(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(pack(key.first + dx, key.second + dy));
        if (it == cells_.end()) continue;
        for (std::size_t id : it->second) {
          if (distance(nodes[id], p) <= kTol) return id;
        }
      }
    }
    nodes.push_back(p);
    cells_[pack(key.first, key.second)].push_back(nodes.size() - 1);
    return nodes.size() - 1;
  }

 private:
  static constexpr double kCell = 1e-6;
  static std::pair<std::int64_t, std::int64_t> cell_of(Point2 p) {
    return {static_cast<std::int64_t>(std::floor(p.x / kCell)),
            static_cast<std::int64_t>(std::floor(p.y / kCell))};
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^ static_cast<std::uint64_t>(y);
  }
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

std::vector<Point2> dedupe_consecutive(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  for (const auto& p : pts) {
    if (out.empty() || distance(out.back(), p) > kTol) out.push_back(p);
  }
  return out;
}

bool same_geometry(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  if (a.size() != b.size()) return false;
  bool fwd = true, rev = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    fwd = fwd && distance(a[i], b[i]) <= kTol;
    rev = rev && distance(a[i], b[b.size() - 1 - i]) <= kTol;
  }
  return fwd || rev;
}

}  // namespace

StreetNetwork build_street_network(std::vector<StreetSegment> segments) {
  StreetNetwork net;
  for (auto& s : segments) {
    s.polyline = dedupe_consecutive(s.polyline);
    if (s.polyline.size() >= 2) net.segments.push_back(std::move(s));
  }

  std::vector<Piece> pieces;
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    const auto& line = net.segments[s].polyline;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      Box box;
      box.expand(line[i]);
      box.expand(line[i + 1]);
      pieces.push_back({s, i, line[i], line[i + 1], box});
    }
  }

  std::vector<std::vector<Split>> splits(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& pc = pieces[k];
    const std::size_t last = net.segments[pc.seg].polyline.size() - 2;
    splits[k].push_back({0.0, pc.a, pc.idx == 0});
    splits[k].push_back({1.0, pc.b, pc.idx == last});
  }

  // Sweep over x-sorted pieces; all candidate pairs with overlapping boxes
  // are intersected exactly once.
  std::vector<std::size_t> order(pieces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return pieces[l].box.min_x < pieces[r].box.min_x ||
           (pieces[l].box.min_x == pieces[r].box.min_x && l < r);
  });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    const Box bi = pieces[i].box.inflated(kTol);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (pieces[j].box.min_x > bi.max_x) break;
      if (!bi.intersects(pieces[j].box)) continue;
      const auto& pi = pieces[i];
      const auto& pj = pieces[j];
      if (pi.seg == pj.seg && (pi.idx + 1 == pj.idx || pj.idx + 1 == pi.idx)) continue;
      const auto hit = intersect_segments(pi.a, pi.b, pj.a, pj.b, kTol);
      if (hit.kind == SegmentIntersection::Kind::none) continue;
      splits[i].push_back({hit.t0, hit.p0, true});
      splits[j].push_back({hit.u0, hit.p0, true});
      if (hit.kind == SegmentIntersection::Kind::overlap) {
        splits[i].push_back({hit.t1, hit.p1, true});
        splits[j].push_back({hit.u1, hit.p1, true});
      }
    }
  }

  NodeRegistry registry;
  StreetGraph& g = net.graph;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_ends;

  std::size_t k = 0;
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    // Sequence of (point, is_node) along the whole segment.
    std::vector<Split> seq;
    const std::size_t n_pieces = net.segments[s].polyline.size() - 1;
    for (std::size_t pi = 0; pi < n_pieces; ++pi, ++k) {
      auto& sp = splits[k];
      std::stable_sort(sp.begin(), sp.end(),
                       [](const Split& l, const Split& r) { return l.t < r.t; });
      for (const auto& e : sp) {
        if (!seq.empty() && distance(seq.back().p, e.p) <= kTol) {
          seq.back().node = seq.back().node || e.node;
          continue;
        }
        seq.push_back(e);
      }
    }
    seq.back().node = true;

    std::vector<Point2> current;
    std::size_t start_node = registry.intern(seq.front().p, g.nodes);
    current.push_back(g.nodes[start_node]);
    for (std::size_t q = 1; q < seq.size(); ++q) {
      if (!seq[q].node) {
        current.push_back(seq[q].p);
        continue;
      }
      const std::size_t end_node = registry.intern(seq[q].p, g.nodes);
      current.push_back(g.nodes[end_node]);
      current = dedupe_consecutive(current);
      double len = 0.0;
      for (std::size_t z = 0; z + 1 < current.size(); ++z) len += distance(current[z], current[z + 1]);
      if (current.size() >= 2 && len > kTol) {
        const auto key = std::minmax(start_node, end_node);
        bool duplicate = false;
        for (std::size_t other : by_ends[{key.first, key.second}]) {
          if (same_geometry(g.edges[other].polyline, current)) duplicate = true;
        }
        if (!duplicate) {
          by_ends[{key.first, key.second}].push_back(g.edges.size());
          g.edges.push_back({start_node, end_node, current, len, s});
        }
      }
      start_node = end_node;
      current.assign(1, g.nodes[start_node]);
    }
  }

  g.incident.assign(g.nodes.size(), {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.incident[g.edges[e].u].push_back(e);
    g.incident[g.edges[e].v].push_back(e);
  }
  return net;
}

std::optional<double> parse_width_tag(const std::string& value) {
  std::size_t pos = 0;
  while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
  const char* begin = value.c_str() + pos;
  char* end = nullptr;
  const double w = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(w) || w <= 0.0) return std::nullopt;
  return w;
}

StreetNetwork parse_streets(const json& feature_collection, const LocalProjection& projection) {
  if (!feature_collection.is_object() || !feature_collection.contains("features") ||
      !feature_collection["features"].is_array()) {
    throw InputError("expected a GeoJSON FeatureCollection of streets");
  }
  std::vector<StreetSegment> segments;
  const auto& features = feature_collection["features"];
  for (std::size_t fi = 0; fi < features.size(); ++fi) {
    const auto& f = features[fi];
    if (!f.contains("geometry") || !f["geometry"].is_object()) continue;
    const auto& geom = f["geometry"];
    const std::string type = geom.value("type", "");
    std::vector<json> lines;
    if (type == "LineString") {
      lines.push_back(geom.value("coordinates", json::array()));
    } else if (type == "MultiLineString") {
      for (const auto& l : geom.value("coordinates", json::array())) lines.push_back(l);
    } else {
      continue;
    }
    std::optional<double> width;
    if (auto p = f.find("properties"); p != f.end() && p->is_object() && p->contains("width")) {
      const auto& w = (*p)["width"];
      if (w.is_number()) {
        if (w.get<double>() > 0) width = w.get<double>();
      } else if (w.is_string()) {
        width = parse_width_tag(w.get<std::string>());
      }
    }
    const std::string base_id = feature_id(f, fi);
    for (std::size_t k = 0; k < lines.size(); ++k) {
      StreetSegment seg;
      seg.id = lines.size() > 1 ? base_id + "#" + std::to_string(k) : base_id;
      seg.width_hint = width;
      if (!lines[k].is_array()) continue;
      for (const auto& pos : lines[k]) {
        if (!pos.is_array() || pos.size() < 2) throw InputError("bad street position");
        seg.polyline.push_back(projection.project({pos[0].get<double>(), pos[1].get<double>()}));
      }
      segments.push_back(std::move(seg));
    }
  }
  StreetNetwork net = build_street_network(std::move(segments));
  if (net.empty()) throw EmptyNetworkError("street input contains no valid linestrings");
  return net;
}

StreetNetwork load_streets(const std::filesystem::path& path, const LocalProjection& projection) {
  return parse_streets(read_json_file(path), projection);
}

}  // namespace osmheight::geodata
