// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "morphometry_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "geometry_oracle.hpp"
#include "graph_oracle.hpp"

namespace osmheight::oracle {

using geodata::Footprint;

namespace {

struct Stats {
  double total = 0, mean = 0, sd = 0;
};

Stats stats(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  for (double x : v) s.total += x;
  s.mean = s.total / v.size();
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / v.size());
  return s;
}

void push(std::vector<double>& row, const Stats& s) {
  row.push_back(s.total);
  row.push_back(s.mean);
  row.push_back(s.sd);
}

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Shape {
  double area, perimeter, compactness, convexity, orientation, corners, axis, eri;
};

Shape shape_of(const std::vector<Point2>& ext, const std::vector<std::vector<Point2>>& holes) {
  Shape s{};
  s.area = std::abs(shoelace(ext));
  s.perimeter = ring_perimeter(ext);
  for (const auto& h : holes) {
    s.area -= std::abs(shoelace(h));
    s.perimeter += ring_perimeter(h);
  }
  const double r = brute_mec_radius(ext);
  s.compactness = s.area / (std::numbers::pi * r * r);
  s.convexity = s.area / std::abs(shoelace(jarvis_hull(ext)));
  const BruteRect rect = brute_min_rect(ext);
  s.orientation = cardinal_offset(rect.long_axis_deg);
  s.corners = count_corners(ext);
  s.axis = 2 * r;
  s.eri = std::sqrt(s.area / rect.area) * rect.perimeter / s.perimeter;
  return s;
}

std::vector<std::vector<Point2>> rings_of(const Footprint& f) {
  std::vector<std::vector<Point2>> out{f.polygon.exterior};
  for (const auto& h : f.polygon.holes) out.push_back(h);
  return out;
}

double wall_overlap(const Footprint& a, const Footprint& b, double tol) {
  double total = 0;
  for (const auto& ra : rings_of(a)) {
    for (std::size_t i = 0; i + 1 < ra.size(); ++i) {
      const Point2 p = ra[i], q = ra[i + 1];
      const double len = dist(p, q);
      if (len == 0) continue;
      const double ux = (q.x - p.x) / len, uy = (q.y - p.y) / len;
      for (const auto& rb : rings_of(b)) {
        for (std::size_t j = 0; j + 1 < rb.size(); ++j) {
          const Point2 c = rb[j], d = rb[j + 1];
          const double oc = std::abs(ux * (c.y - p.y) - uy * (c.x - p.x));
          const double od = std::abs(ux * (d.y - p.y) - uy * (d.x - p.x));
          if (oc > tol || od > tol) continue;
          const double tc = ux * (c.x - p.x) + uy * (c.y - p.y);
          const double td = ux * (d.x - p.x) + uy * (d.y - p.y);
          const double lo = std::max(0.0, std::min(tc, td));
          const double hi = std::min(len, std::max(tc, td));
          total += std::max(0.0, hi - lo);
        }
      }
    }
  }
  return total;
}

// Grid lines: sorted coordinate clusters separated by more than `gap`.
std::vector<double> cluster_lines(std::vector<double> v, double gap) {
  std::sort(v.begin(), v.end());
  std::vector<double> centres;
  std::vector<double> group;
  auto flush = [&] {
    double s = 0;
    for (double x : group) s += x;
    centres.push_back(s / group.size());
    group.clear();
  };
  for (double x : v) {
    if (!group.empty() && x - group.back() > gap) flush();
    group.push_back(x);
  }
  if (!group.empty()) flush();
  return centres;
}

std::size_t nearest_line(const std::vector<double>& lines, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (std::abs(lines[i] - x) < std::abs(lines[best] - x)) best = i;
  }
  return best;
}

struct GridBlock {
  std::vector<Point2> ring;  // counter-clockwise, open
  Shape shape;
  Point2 centroid;
};

Point2 ring_centroid(const std::vector<Point2>& r) {
  double a = 0, cx = 0, cy = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point2 p = r[i], q = r[(i + 1) % r.size()];
    const double c = p.x * q.y - q.x * p.y;
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (3 * a), cy / (3 * a)};
}

std::vector<GridBlock> grid_blocks(const geodata::StreetGraph& g) {
  std::vector<double> xs, ys;
  for (const auto& p : g.nodes) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto lx = cluster_lines(xs, 1.0), ly = cluster_lines(ys, 1.0);
  std::map<std::pair<std::size_t, std::size_t>, Point2> at;
  for (const auto& p : g.nodes) {
    const auto key = std::make_pair(nearest_line(lx, p.x), nearest_line(ly, p.y));
    if (at.contains(key)) throw std::runtime_error("two nodes on one grid crossing");
    at[key] = p;
  }
  if (at.size() != lx.size() * ly.size()) throw std::runtime_error("street network is not a full grid");
  std::vector<GridBlock> out;
  for (std::size_t i = 0; i + 1 < lx.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ly.size(); ++j) {
      GridBlock b;
      b.ring = {at[{i, j}], at[{i + 1, j}], at[{i + 1, j + 1}], at[{i, j + 1}]};
      b.shape = shape_of(b.ring, {});
      b.centroid = ring_centroid(b.ring);
      out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> brute_feature_rows(std::span<const Footprint> fps,
                                                    const geodata::StreetNetwork& net,
                                                    const morphometry::MorphometryConfig& config) {
  const std::size_t n = fps.size();
  const auto& g = net.graph;

  // Building level.
  std::vector<std::array<double, 9>> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ext = open_ring(fps[i].polygon.exterior);
    std::vector<std::vector<Point2>> holes;
    for (const auto& h : fps[i].polygon.holes) holes.push_back(open_ring(h));
    const Shape s = shape_of(ext, holes);
    double walls = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) walls += wall_overlap(fps[i], fps[j], 1e-6);
    }
    base[i] = {s.area, s.perimeter, s.compactness, s.convexity, s.orientation,
               walls,  s.corners,   s.axis,        s.eri};
  }
  const std::array<std::size_t, 6> buffered = {0, 1, 3, 2, 4, 6};

  // Street graph.
  std::vector<WeightedEdge> wedges;
  std::vector<std::size_t> degree(g.nodes.size(), 0);
  std::vector<double> edge_len(g.edges.size(), 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& pl = g.edges[e].polyline;
    for (std::size_t k = 0; k + 1 < pl.size(); ++k) edge_len[e] += dist(pl[k], pl[k + 1]);
    wedges.push_back({g.edges[e].u, g.edges[e].v, edge_len[e]});
    ++degree[g.edges[e].u];
    ++degree[g.edges[e].v];
  }
  const auto apsp = floyd_warshall(g.nodes.size(), wedges);
  const auto closeness = closeness_within(apsp, config.local_closeness_radius_m);
  const auto between = pair_betweenness(g.nodes.size(), wedges, apsp, 1e-9);

  auto nearest_edge = [&](Point2 c) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const double d = polyline_distance(c, g.edges[e].polyline);
      if (d < bd) {
        bd = d;
        best = e;
      }
    }
    return best;
  };
  std::vector<std::size_t> near(n);
  std::vector<std::size_t> load(g.edges.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    near[i] = nearest_edge(fps[i].centroid);
    ++load[near[i]];
  }

  // Blocks.
  const auto blocks = grid_blocks(g);
  std::vector<std::vector<std::size_t>> members(blocks.size());
  std::vector<std::size_t> outside;
  std::vector<long> block_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (inside(fps[i].centroid, blocks[b].ring)) {
        block_of[i] = static_cast<long>(b);
        members[b].push_back(i);
        break;
      }
    }
    if (block_of[i] < 0) outside.push_back(i);
  }
  auto containment = [&](const std::vector<std::size_t>& m, std::vector<double>& row) {
    std::vector<double> areas;
    for (std::size_t i : m) areas.push_back(base[i][0]);
    row.push_back(static_cast<double>(m.size()));
    push(row, stats(areas));
  };

  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    const Point2 c = fps[i].centroid;
    row.insert(row.end(), base[i].begin(), base[i].end());
    for (double r : config.buffers) {
      std::vector<std::size_t> nb;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && dist(c, fps[j].centroid) <= r) nb.push_back(j);
      }
      for (std::size_t feat : buffered) {
        std::vector<double> v;
        for (std::size_t j : nb) v.push_back(base[j][feat]);
        push(row, stats(v));
      }
    }

    const std::size_t e = near[i];
    const auto& pl = g.edges[e].polyline;
    const auto& seg = net.segments[g.edges[e].segment];
    row.push_back(edge_len[e]);
    row.push_back(seg.width_hint.value_or(config.default_street_width_m));
    row.push_back(polyline_distance(c, pl));
    row.push_back(dist(pl.front(), pl.back()) / edge_len[e]);
    double ix_d = std::numeric_limits<double>::infinity(), ix_deg = 0;
    std::size_t node = 0;
    double node_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      const double d = dist(c, g.nodes[v]);
      if (degree[v] >= 3 && d < ix_d) {
        ix_d = d;
        ix_deg = static_cast<double>(degree[v]);
      }
      if (d < node_d) {
        node_d = d;
        node = v;
      }
    }
    row.push_back(std::isfinite(ix_d) ? ix_d : 0.0);
    row.push_back(ix_deg);
    row.push_back(closeness[node]);
    row.push_back(between[node]);
    row.push_back(static_cast<double>(load[e]));
    for (double r : config.buffers) {
      std::vector<double> sd, sl, id;
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const double d = polyline_distance(c, g.edges[k].polyline);
        if (d <= r) {
          sd.push_back(d);
          sl.push_back(edge_len[k]);
        }
      }
      for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (degree[v] >= 3 && dist(c, g.nodes[v]) <= r) id.push_back(dist(c, g.nodes[v]));
      }
      push(row, stats(sd));
      push(row, stats(id));
      push(row, stats(sl));
      row.push_back(static_cast<double>(sd.size()));
      row.push_back(static_cast<double>(id.size()));
    }

    if (block_of[i] >= 0) {
      const auto& b = blocks[static_cast<std::size_t>(block_of[i])];
      const Shape& s = b.shape;
      for (double v : {s.area, s.perimeter, s.convexity, s.compactness, s.orientation, s.corners,
                       s.axis, s.eri}) {
        row.push_back(v);
      }
      containment(members[static_cast<std::size_t>(block_of[i])], row);
    } else {
      row.insert(row.end(), 8, 0.0);
      containment(outside, row);
    }
    for (double r : config.block_buffers) {
      std::vector<double> areas, corners;
      for (const auto& b : blocks) {
        if (dist(c, b.centroid) <= r) {
          areas.push_back(b.shape.area);
          corners.push_back(b.shape.corners);
        }
      }
      row.push_back(static_cast<double>(areas.size()));
      push(row, stats(areas));
      push(row, stats(corners));
    }
  }
  return rows;
}

}  // namespace osmheight::oracle
