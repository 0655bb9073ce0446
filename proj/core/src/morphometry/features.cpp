// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/morphometry/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osmheight/errors.hpp"
#include "osmheight/morphometry/shape.hpp"
#include "osmheight/morphometry/summary.hpp"
#include "osmheight/parallel.hpp"

namespace osmheight::morphometry {

using geodata::Box;
using geodata::Footprint;
using geodata::Point2;
using geodata::SpatialIndex;
using nlohmann::json;

const std::array<const char*, kBuildingBaseCount> kBuildingBaseNames = {
    "area",         "perimeter",           "circular_compactness",
    "convexity",    "orientation",         "shared_wall_length",
    "corner_count", "longest_axis_length", "equivalent_rectangular_index"};
constexpr std::array<int, kBuildingBaseCount> kBuildingBaseDims = {2, 1, 0, 0, 0, 1, 0, 1, 0};

const std::array<std::size_t, 6> kBufferedBuildingFeatures = {0, 1, 3, 2, 4, 6};

const std::array<const char*, kStreetBaseCount> kStreetBaseNames = {
    "nearest_segment_length",         "nearest_segment_width",
    "distance_to_nearest_segment",    "nearest_segment_linearity",
    "distance_to_nearest_intersection", "nearest_intersection_degree",
    "local_closeness",                "betweenness",
    "buildings_on_nearest_segment"};
constexpr std::array<int, kStreetBaseCount> kStreetBaseDims = {1, 1, 1, 0, 1, 0, -1, 0, 0};

const std::array<const char*, kBlockValueCount> kBlockValueNames = {
    "area",         "perimeter",           "convexity",
    "circular_compactness", "orientation", "corner_count",
    "longest_axis_length",  "equivalent_rectangular_index",
    "building_count",       "building_area_total",
    "building_area_mean",   "building_area_std"};
constexpr std::array<int, kBlockValueCount> kBlockValueDims = {2, 1, 0, 0, 0, 0, 1, 0, 0, 2, 2, 2};

namespace {

constexpr std::array<Aggregator, 3> kAggs = {Aggregator::total, Aggregator::mean, Aggregator::std};

// Sorting first makes the floating-point sums independent of input order.
Summary summarize_sorted(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  return summarize(values);
}

void append(std::vector<double>& out, const Summary& s) {
  out.push_back(s.total);
  out.push_back(s.mean);
  out.push_back(s.std);
}

Box around(Point2 p, double r) { return {p.x - r, p.y - r, p.x + r, p.y + r}; }

std::string buffer_tag(double r) {
  if (r == std::floor(r) && std::abs(r) < 1e15) {
    return std::to_string(static_cast<long long>(r)) + "m";
  }
  return format_double(r) + "m";
}

}  // namespace

json MorphometryConfig::to_json() const {
  return {{"buffers", buffers},
          {"block_buffers", block_buffers},
          {"local_closeness_radius_m", local_closeness_radius_m},
          {"default_street_width_m", default_street_width_m}};
}

MorphometryConfig MorphometryConfig::from_json(const json& j) {
  MorphometryConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw InputError("morphometry config must be an object");
  try {
    if (j.contains("buffers")) c.buffers = j["buffers"].get<std::vector<double>>();
    if (j.contains("block_buffers")) c.block_buffers = j["block_buffers"].get<std::vector<double>>();
    c.local_closeness_radius_m = j.value("local_closeness_radius_m", c.local_closeness_radius_m);
    c.default_street_width_m = j.value("default_street_width_m", c.default_street_width_m);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad morphometry config: ") + e.what());
  }
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  for (const auto* list : {&c.buffers, &c.block_buffers}) {
    for (double r : *list) {
      if (!positive(r)) throw InputError("buffer radii must be positive");
    }
    std::vector<double> sorted = *list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("buffer radii must be distinct");
    }
  }
  if (!positive(c.local_closeness_radius_m)) throw InputError("local_closeness_radius_m must be positive");
  if (!positive(c.default_street_width_m)) throw InputError("default_street_width_m must be positive");
  return c;
}

// ---------------------------------------------------------------- building

BuildingBase building_base_features(std::size_t self, std::span<const Footprint> all,
                                    const SpatialIndex& index) {
  const Footprint& f = all[self];
  const ShapeMetrics m = shape_metrics(f.polygon);
  std::vector<const Footprint*> others;
  for (std::size_t j : index.query(f.bbox.inflated(1e-6))) {
    if (j != self) others.push_back(&all[j]);
  }
  return {m.area,
          m.perimeter,
          m.circular_compactness,
          m.convexity,
          m.orientation,
          shared_wall_length(f, others),
          m.corner_count,
          m.longest_axis_length,
          m.equivalent_rectangular_index};
}

std::vector<double> buffered_aggregates(std::size_t self, std::span<const BuildingBase> base,
                                        const SpatialIndex& index,
                                        std::span<const double> buffers) {
  std::vector<double> out;
  out.reserve(buffers.size() * kBufferedBuildingFeatures.size() * 3);
  const Point2 c = index.point(self);
  std::vector<double> vals;
  for (double r : buffers) {
    auto nb = index.within(c, r);
    std::erase(nb, self);
    for (std::size_t feat : kBufferedBuildingFeatures) {
      vals.clear();
      for (std::size_t j : nb) vals.push_back(base[j][feat]);
      append(out, summarize_sorted(vals));
    }
  }
  return out;
}

// ------------------------------------------------------------------ street

StreetContext::StreetContext(const geodata::StreetNetwork& net,
                             std::span<const Footprint> footprints, double closeness_radius_m,
                             double default_width_m)
    : net_(&net), default_width_m_(default_width_m) {
  if (net.empty()) throw FeatureError("street network is empty");
  const auto& g = net.graph;
  const WeightedGraph wg = WeightedGraph::from_streets(g);
  betweenness_ = morphometry::betweenness(wg, true);
  closeness_ = local_closeness_all(wg, closeness_radius_m);

  std::vector<Box> node_boxes;
  for (const auto& p : g.nodes) node_boxes.push_back({p.x, p.y, p.x, p.y});
  node_index_ = SpatialIndex(node_boxes, g.nodes);

  std::vector<Box> edge_boxes;
  std::vector<Point2> edge_points;
  for (const auto& e : g.edges) {
    edge_boxes.push_back(geodata::bounding_box(e.polyline));
    edge_points.push_back(edge_boxes.back().center());
  }
  edge_index_ = SpatialIndex(std::move(edge_boxes), std::move(edge_points));

  std::vector<Box> ix_boxes;
  std::vector<Point2> ix_points;
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (g.degree(v) >= 3) {
      intersections_.push_back(v);
      ix_boxes.push_back(node_boxes[v]);
      ix_points.push_back(g.nodes[v]);
    }
  }
  intersection_index_ = SpatialIndex(std::move(ix_boxes), std::move(ix_points));

  nearest_edge_.resize(footprints.size());
  edge_load_.assign(g.edges.size(), 0);
  for (std::size_t i = 0; i < footprints.size(); ++i) {
    nearest_edge_[i] = nearest_edge(footprints[i].centroid);
    ++edge_load_[nearest_edge_[i]];
  }
}

std::size_t StreetContext::nearest_edge(Point2 p) const {
  const auto& edges = net_->graph.edges;
  // Grow a search box until the best candidate lies inside it; every edge
  // closer than that candidate must intersect the box.
  double r = 64.0;
  for (;;) {
    std::size_t best = edges.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t e : edge_index_.query(around(p, r))) {
      const double d = geodata::point_polyline_distance(p, edges[e].polyline);
      if (d < best_d || (d == best_d && e < best)) {
        best = e;
        best_d = d;
      }
    }
    if (best < edges.size() && best_d <= r) return best;
    r *= 4.0;
  }
}

double StreetContext::edge_width(std::size_t edge) const {
  const auto& seg = net_->segments[net_->graph.edges[edge].segment];
  return seg.width_hint.value_or(default_width_m_);
}

StreetBase street_base_features(std::size_t building, const Footprint& f,
                                const StreetContext& ctx) {
  const auto& g = ctx.network().graph;
  const Point2 c = f.centroid;
  const std::size_t e = ctx.nearest_edge_of(building);
  const auto& edge = g.edges[e];

  StreetBase out{};
  out[0] = edge.length;
  out[1] = ctx.edge_width(e);
  out[2] = geodata::point_polyline_distance(c, edge.polyline);
  out[3] = edge.length > 0.0
               ? geodata::distance(edge.polyline.front(), edge.polyline.back()) / edge.length
               : 0.0;
  if (ctx.intersection_index().size() > 0) {
    const std::size_t k = ctx.intersection_index().nearest(c, 1).front();
    out[4] = geodata::distance(c, ctx.intersection_index().point(k));
    out[5] = static_cast<double>(g.degree(ctx.intersections()[k]));
  }
  const std::size_t node = ctx.node_index().nearest(c, 1).front();
  out[6] = ctx.closeness()[node];
  out[7] = ctx.betweenness()[node];
  out[8] = static_cast<double>(ctx.buildings_on_edge(e));
  return out;
}

std::vector<double> street_buffered_aggregates(const Footprint& f, const StreetContext& ctx,
                                               std::span<const double> buffers) {
  const auto& edges = ctx.network().graph.edges;
  const Point2 c = f.centroid;
  std::vector<double> out;
  out.reserve(buffers.size() * 11);
  std::vector<double> seg_dist, seg_len, ix_dist;
  for (double r : buffers) {
    seg_dist.clear();
    seg_len.clear();
    ix_dist.clear();
    for (std::size_t e : ctx.edge_index().query(around(c, r))) {
      const double d = geodata::point_polyline_distance(c, edges[e].polyline);
      if (d <= r) {
        seg_dist.push_back(d);
        seg_len.push_back(edges[e].length);
      }
    }
    for (std::size_t k : ctx.intersection_index().within(c, r)) {
      ix_dist.push_back(geodata::distance(c, ctx.intersection_index().point(k)));
    }
    const double n_seg = static_cast<double>(seg_dist.size());
    const double n_ix = static_cast<double>(ix_dist.size());
    append(out, summarize_sorted(seg_dist));
    append(out, summarize_sorted(ix_dist));
    append(out, summarize_sorted(seg_len));
    out.push_back(n_seg);
    out.push_back(n_ix);
  }
  return out;
}

// ------------------------------------------------------------------- block

namespace {

void fill_containment(BlockValues& out, std::span<const std::size_t> members,
                      std::span<const Footprint> footprints) {
  std::vector<double> areas;
  areas.reserve(members.size());
  for (std::size_t i : members) areas.push_back(footprints[i].area);
  const Summary s = summarize_sorted(areas);
  out[8] = static_cast<double>(members.size());
  out[9] = s.total;
  out[10] = s.mean;
  out[11] = s.std;
}

}  // namespace

BlockValues block_features(const Block& b, std::span<const Footprint> footprints) {
  const ShapeMetrics m = shape_metrics(b.polygon);
  BlockValues out{};
  out[0] = m.area;
  out[1] = m.perimeter;
  out[2] = m.convexity;
  out[3] = m.circular_compactness;
  out[4] = m.orientation;
  out[5] = m.corner_count;
  out[6] = m.longest_axis_length;
  out[7] = m.equivalent_rectangular_index;
  fill_containment(out, b.buildings, footprints);
  return out;
}

BlockValues unbounded_block_features(std::span<const std::size_t> members,
                                     std::span<const Footprint> footprints) {
  BlockValues out{};
  fill_containment(out, members, footprints);
  return out;
}

std::vector<double> block_buffered_aggregates(Point2 centroid,
                                              std::span<const BlockValues> values,
                                              const SpatialIndex& block_index,
                                              std::span<const double> buffers) {
  std::vector<double> out;
  out.reserve(buffers.size() * 7);
  std::vector<double> areas, corners;
  for (double r : buffers) {
    areas.clear();
    corners.clear();
    for (std::size_t b : block_index.within(centroid, r)) {
      areas.push_back(values[b][0]);
      corners.push_back(values[b][5]);
    }
    out.push_back(static_cast<double>(areas.size()));
    append(out, summarize_sorted(areas));
    append(out, summarize_sorted(corners));
  }
  return out;
}

// ---------------------------------------------------------------- manifest

FeatureManifest default_manifest(const MorphometryConfig& config) {
  FeatureManifest m;
  auto add = [&](std::string name, FeatureLevel level, std::string base, double buffer,
                 Aggregator agg, int dim) {
    m.entries.push_back({std::move(name), level, std::move(base), buffer, agg, dim});
  };
  auto add_aggs = [&](const std::string& prefix, FeatureLevel level, const std::string& base,
                      double r, int dim) {
    for (Aggregator a : kAggs) {
      add(prefix + base + "_" + to_string(a) + "_" + buffer_tag(r), level, base, r, a, dim);
    }
  };

  for (std::size_t k = 0; k < kBuildingBaseCount; ++k) {
    add(std::string("bldg_") + kBuildingBaseNames[k], FeatureLevel::building, kBuildingBaseNames[k],
        0.0, Aggregator::none, kBuildingBaseDims[k]);
  }
  for (double r : config.buffers) {
    for (std::size_t feat : kBufferedBuildingFeatures) {
      add_aggs("bldg_", FeatureLevel::building, kBuildingBaseNames[feat], r, kBuildingBaseDims[feat]);
    }
  }

  for (std::size_t k = 0; k < kStreetBaseCount; ++k) {
    add(std::string("street_") + kStreetBaseNames[k], FeatureLevel::street, kStreetBaseNames[k], 0.0,
        Aggregator::none, kStreetBaseDims[k]);
  }
  for (double r : config.buffers) {
    for (const char* base : {"segment_distance", "intersection_distance", "segment_length"}) {
      add_aggs("street_", FeatureLevel::street, base, r, 1);
    }
    add("street_segment_count_" + buffer_tag(r), FeatureLevel::street, "segment", r,
        Aggregator::count, 0);
    add("street_intersection_count_" + buffer_tag(r), FeatureLevel::street, "intersection", r,
        Aggregator::count, 0);
  }

  for (std::size_t k = 0; k < kBlockValueCount; ++k) {
    const std::string name = kBlockValueNames[k];
    Aggregator agg = Aggregator::none;
    std::string base = name;
    if (k == 8) {
      agg = Aggregator::count;
      base = "building";
    } else if (k > 8) {
      agg = kAggs[k - 9];
      base = "building_area";
    }
    add("block_" + name, FeatureLevel::block, base, 0.0, agg, kBlockValueDims[k]);
  }
  for (double r : config.block_buffers) {
    add("block_count_" + buffer_tag(r), FeatureLevel::block, "block", r, Aggregator::count, 0);
    add_aggs("block_", FeatureLevel::block, "area", r, 2);
    add_aggs("block_", FeatureLevel::block, "corner_count", r, 0);
  }
  return m;
}

// ---------------------------------------------------------------- assembly

FeatureMatrix assemble_matrix(std::span<const Footprint> footprints,
                              const geodata::StreetNetwork& net, const MorphometryConfig& config) {
  const std::size_t n = footprints.size();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& f : footprints) ids.push_back(f.id);
  FeatureMatrix matrix(std::move(ids), default_manifest(config));
  const std::size_t m = matrix.cols();

  const SpatialIndex index = geodata::build_spatial_index(footprints);
  const StreetContext street(net, footprints, config.local_closeness_radius_m,
                             config.default_street_width_m);
  const BlockPartition partition = tessellate_blocks(net, footprints);

  std::vector<BlockValues> block_values(partition.blocks.size());
  std::vector<Box> block_boxes;
  std::vector<Point2> block_points;
  for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
    block_values[b] = block_features(partition.blocks[b], footprints);
    const Point2 c = partition.blocks[b].centroid;
    block_boxes.push_back({c.x, c.y, c.x, c.y});
    block_points.push_back(c);
  }
  const SpatialIndex block_index(std::move(block_boxes), std::move(block_points));
  const BlockValues unbounded = unbounded_block_features(partition.unbounded, footprints);

  std::vector<BuildingBase> base(n);
  parallel_for(
      n, [&](std::size_t i) { base[i] = building_base_features(i, footprints, index); },
      config.threads);

  parallel_for(
      n,
      [&](std::size_t i) {
        const Footprint& f = footprints[i];
        try {
          std::vector<double> row;
          row.reserve(m);
          row.insert(row.end(), base[i].begin(), base[i].end());
          const auto bb = buffered_aggregates(i, base, index, config.buffers);
          row.insert(row.end(), bb.begin(), bb.end());
          const auto sb = street_base_features(i, f, street);
          row.insert(row.end(), sb.begin(), sb.end());
          const auto sa = street_buffered_aggregates(f, street, config.buffers);
          row.insert(row.end(), sa.begin(), sa.end());
          const auto& bv = partition.membership[i] ? block_values[*partition.membership[i]]
                                                   : unbounded;
          row.insert(row.end(), bv.begin(), bv.end());
          const auto ba = block_buffered_aggregates(f.centroid, block_values,
                                                    block_index, config.block_buffers);
          row.insert(row.end(), ba.begin(), ba.end());
          if (row.size() != m) {
            throw FeatureError("row has " + std::to_string(row.size()) + " values, manifest has " +
                               std::to_string(m));
          }
          for (std::size_t c = 0; c < m; ++c) {
            if (!std::isfinite(row[c])) {
              throw FeatureError("non-finite value for " + matrix.manifest().entries[c].name);
            }
            matrix.at(i, c) = row[c];
          }
        } catch (const Error& e) {
          throw FeatureError("building " + f.id + ": " + e.what());
        }
      },
      config.threads);
  return matrix;
}

}  // namespace osmheight::morphometry
