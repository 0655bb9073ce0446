// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.
//
//   osmheight_acceptance [--validator <validate_cityjson.py>] [--python <exe>]
//                        [--only <n>] [--work <dir>]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geometry_oracle.hpp"
#include "morphometry_oracle.hpp"
#include "small_oracles.hpp"
#include "osmheight/errors.hpp"
#include "osmheight/floors/floor_estimate.hpp"
#include "osmheight/floors/row_clustering.hpp"
#include "osmheight/geodata/spatial_index.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/lod1/cityjson.hpp"
#include "osmheight/lod1/obj.hpp"
#include "osmheight/morphometry/blocks.hpp"
#include "osmheight/morphometry/features.hpp"
#include "osmheight/pipeline/config.hpp"
#include "osmheight/pipeline/stages.hpp"
#include "osmheight/pipeline/synthetic_city.hpp"
#include "osmheight/random.hpp"
#include "osmheight/ssl/experiment.hpp"
#include "osmheight/ssl/linear_gd.hpp"
#include "osmheight/ssl/metrics.hpp"
#include "osmheight/svi/ray_cast.hpp"

namespace fs = std::filesystem;
using namespace osmheight;
using geodata::Footprint;
using geodata::Point2;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path validator;
  std::string python = "python3";
  fs::path work = fs::temp_directory_path() / "osmheight_acceptance";
};

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Footprints and streets of a generated city, read back the way the
// pipeline reads them.
struct LoadedCity {
  pipeline::Scene scene;
  geodata::StreetNetwork streets;
};

LoadedCity load_city(const fs::path& dir) {
  LoadedCity c;
  c.scene = pipeline::load_scene(dir / "buildings.geojson");
  c.streets = geodata::load_streets(dir / "streets.geojson", c.scene.projection);
  return c;
}

// ------------------------------------------------------------------ 1

Outcome morphometry_oracle(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  pipeline::SyntheticCitySpec spec;
  spec.seed = 11;
  const auto city = pipeline::generate_synthetic_city(spec);
  const fs::path dir = opt.work / "c1";
  city.write(dir);
  const LoadedCity lc = load_city(dir);
  const morphometry::MorphometryConfig config;
  const auto fm = morphometry::assemble_matrix(lc.scene.footprints, lc.streets, config);
  const auto ref = oracle::brute_feature_rows(lc.scene.footprints, lc.streets, config);
  const double secs = elapsed(t0);

  std::size_t bad = 0;
  std::string first;
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    if (ref[i].size() != fm.cols()) return {false, "oracle row width " + std::to_string(ref[i].size())};
    for (std::size_t c = 0; c < fm.cols(); ++c) {
      if (!close(fm.at(i, c), ref[i][c], 1e-9)) {
        if (bad++ == 0) {
          first = fm.manifest().entries[c].name + " of " + fm.building_ids()[i] + ": " +
                  std::to_string(fm.at(i, c)) + " vs " + std::to_string(ref[i][c]);
        }
      }
    }
  }
  const bool ok = bad == 0 && fm.cols() == 131 && secs < 30.0;
  std::string d = std::to_string(fm.rows()) + " buildings x " + std::to_string(fm.cols()) +
                  " features, " + std::to_string(bad) + " mismatches, " + fmt(secs, 2) + " s";
  if (bad) d += "; first: " + first;
  return {ok, d};
}

// ------------------------------------------------------------------ 2

geodata::StreetNetwork street_grid(int k, double spacing) {
  std::vector<geodata::StreetSegment> segs;
  const double len = spacing * (k - 1);
  for (int i = 0; i < k; ++i) {
    segs.push_back({"h" + std::to_string(i), {{0, i * spacing}, {len, i * spacing}}, {}});
    segs.push_back({"v" + std::to_string(i), {{i * spacing, 0}, {i * spacing, len}}, {}});
  }
  return geodata::build_street_network(std::move(segs));
}

geodata::StreetNetwork random_tree(Rng& rng, int nodes) {
  std::vector<Point2> pts{{0, 0}};
  std::vector<geodata::StreetSegment> segs;
  for (int i = 1; i < nodes; ++i) {
    // Attach a new point to a random existing one with a short spoke; reject
    // spokes that would cross existing ones so the drawing stays a tree.
    for (int attempt = 0; attempt < 100; ++attempt) {
      const Point2 from = pts[rng.index(pts.size())];
      const double a = rng.uniform(0, 2 * std::numbers::pi);
      const Point2 to{from.x + 40 * std::cos(a), from.y + 40 * std::sin(a)};
      bool crosses = false;
      for (const auto& s : segs) {
        const auto hit = geodata::intersect_segments(from, to, s.polyline[0], s.polyline[1]);
        if (hit.kind != geodata::SegmentIntersection::Kind::none &&
            geodata::distance(hit.p0, from) > 1e-6) {
          crosses = true;
        }
      }
      bool near = false;
      for (const auto& p : pts) near = near || geodata::distance(p, to) < 5.0;
      if (crosses || near) continue;
      segs.push_back({"t" + std::to_string(i), {from, to}, {}});
      pts.push_back(to);
      break;
    }
  }
  return geodata::build_street_network(std::move(segs));
}

Outcome polygonization(const Options&) {
  std::string d;
  bool ok = true;
  for (int k = 2; k <= 6; ++k) {
    const auto net = street_grid(k, 100.0);
    const auto faces = morphometry::extract_faces(net);
    const long v = static_cast<long>(net.graph.nodes.size());
    const long e = static_cast<long>(net.graph.edges.size());
    const long euler_bounded = e - v + 1;  // connected plane graph
    const long expected = static_cast<long>(k - 1) * (k - 1);
    ok = ok && static_cast<long>(faces.size()) == expected && euler_bounded == expected;
    d += "k=" + std::to_string(k) + ":" + std::to_string(faces.size()) + " ";
  }
  Rng rng(2);
  std::size_t tree_faces = 0;
  for (int t = 0; t < 50; ++t) {
    tree_faces += morphometry::extract_faces(random_tree(rng, 3 + t % 20)).size();
  }
  ok = ok && tree_faces == 0;
  d += "| 50 trees: " + std::to_string(tree_faces) + " blocks";
  return {ok, d};
}

// ------------------------------------------------------------------ 3

Footprint random_building(Rng& rng, const std::string& id) {
  const Point2 c{rng.uniform(-60, 60), rng.uniform(-60, 60)};
  const int sides = 3 + static_cast<int>(rng.index(6));
  const double r = rng.uniform(3, 15);
  const double rot = rng.uniform(0, 2 * std::numbers::pi);
  geodata::Ring ring;
  for (int s = 0; s < sides; ++s) {
    const double a = rot + 2 * std::numbers::pi * s / sides;
    const double rr = r * rng.uniform(0.7, 1.0);
    ring.push_back({c.x + rr * std::cos(a), c.y + rr * std::sin(a)});
  }
  ring.push_back(ring.front());
  return Footprint::create(id, {ring, {}});
}

Outcome ray_casting(const Options&) {
  Rng rng(3);
  std::size_t agree = 0, scenes = 0, hits = 0, inside_total = 0, inside_rejected = 0;
  while (scenes < 1000) {
    std::vector<Footprint> fps;
    const int n = 1 + static_cast<int>(rng.index(8));
    for (int i = 0; i < n; ++i) fps.push_back(random_building(rng, "b" + std::to_string(i)));
    const auto index = geodata::build_spatial_index(fps);

    svi::CameraRecord cam;
    cam.image_id = "img";
    cam.position = {rng.uniform(-80, 80), rng.uniform(-80, 80)};
    cam.compass_angle = rng.uniform(0, 360);
    if (scenes % 2 == 0) {
      // Aim roughly at one of the buildings so most scenes have a hit.
      const Point2 t = fps[rng.index(fps.size())].centroid - cam.position;
      cam.compass_angle = svi::normalize_compass(std::atan2(t.x, t.y) * 180.0 / std::numbers::pi +
                                                 rng.uniform(-15, 15));
    }

    bool in = false;
    for (const auto& f : fps) in = in || oracle::inside(cam.position, oracle::open_ring(f.exterior()));
    if (in) {
      ++inside_total;
      try {
        svi::cast_ray(cam, fps, index, 100.0);
      } catch (const InsideBuildingError&) {
        ++inside_rejected;
      }
      continue;
    }
    ++scenes;
    const auto got = svi::cast_ray(cam, fps, index, 100.0);
    const auto want = oracle::brute_ray_hit(cam.position, cam.compass_angle, fps, 100.0);
    if (want) ++hits;
    const bool same = got.has_value() == want.has_value() &&
                      (!got || got->building_id == fps[want->footprint].id);
    if (same) ++agree;
  }
  // A camera inside each footprint, at its centroid (the generator's shapes
  // are star-shaped around it).
  for (int t = 0; t < 200; ++t) {
    std::vector<Footprint> fps{random_building(rng, "b0")};
    svi::CameraRecord cam;
    cam.image_id = "img";
    cam.position = fps[0].centroid;
    cam.compass_angle = rng.uniform(0, 360);
    ++inside_total;
    try {
      svi::cast_ray(cam, fps, geodata::build_spatial_index(fps), 100.0);
    } catch (const InsideBuildingError&) {
      ++inside_rejected;
    }
  }
  const bool ok = agree == scenes && inside_rejected == inside_total;
  return {ok, std::to_string(agree) + "/" + std::to_string(scenes) + " scenes agree (" +
                  std::to_string(hits) + " with a hit); inside cameras rejected " +
                  std::to_string(inside_rejected) + "/" + std::to_string(inside_total)};
}

// ------------------------------------------------------------------ 4

Outcome floor_estimation(const Options&) {
  Rng rng(4);
  auto run = [&](double jitter, int count) {
    int exact = 0;
    for (int i = 0; i < count; ++i) {
      const int floors = 2 + static_cast<int>(rng.index(7));
      const auto d = pipeline::synthesize_facade("f" + std::to_string(i), floors, jitter, rng);
      const auto est = floors::estimate_floors(floors::cluster_rows(d), d);
      if (est.floors == floors) ++exact;
    }
    return exact;
  };
  const int n = 1000;
  const int jittered = run(0.2, n);
  const int clean = run(0.0, n);

  int kmeans_agree = 0;
  const int kmeans_trials = 2000;
  for (int t = 0; t < kmeans_trials; ++t) {
    const std::size_t m = 2 + rng.index(11);
    std::vector<double> v(m);
    for (auto& x : v) x = t % 3 == 0 ? std::round(rng.uniform(0, 20)) : rng.uniform(0, 100);
    std::sort(v.begin(), v.end());
    const double want = oracle::exhaustive_two_partition_wcss(v);
    const auto got = floors::two_means_1d(v);
    const bool distinct = v.front() != v.back();
    // All-equal gaps admit no split; the exhaustive optimum is then 0 too.
    const bool ok = distinct ? (got.split > 0 && std::abs(got.wcss - want) <= 1e-9 * std::max(1.0, want))
                             : (got.split == 0 && want == 0.0);
    if (ok) ++kmeans_agree;
  }
  const double rate = static_cast<double>(jittered) / n;
  const bool ok = rate >= 0.95 && clean == n && kmeans_agree == kmeans_trials;
  return {ok, "jitter 0.2: " + std::to_string(jittered) + "/" + std::to_string(n) +
                  " exact; no jitter: " + std::to_string(clean) + "/" + std::to_string(n) +
                  "; k-means = exhaustive " + std::to_string(kmeans_agree) + "/" +
                  std::to_string(kmeans_trials)};
}

// ------------------------------------------------------------------ 5

Outcome height_conversion(const Options&) {
  const double res = floors::floors_to_height(4, geodata::BuildingFunction::residential);
  const double com = floors::floors_to_height(3, geodata::BuildingFunction::commercial_public);
  return {res == 10.0 && com == 10.5, "4 residential -> " + fmt(res, 6) + " m, 3 commercial -> " +
                                          fmt(com, 6) + " m"};
}

// ------------------------------------------------------------------ 6

Outcome metrics(const Options&) {
  // errors 0.5, -1, 2, -0.5; truth mean 3.5, SS_tot 5.
  const std::vector<double> truth{2.0, 3.0, 4.0, 5.0};
  const std::vector<double> pred{2.5, 2.0, 6.0, 4.5};
  const auto m = ssl::evaluate(pred, truth);
  const double mae = 4.0 / 4.0;
  const double rmse = std::sqrt(5.5 / 4.0);
  const double r2 = 1.0 - 5.5 / 5.0;
  const bool fixed_ok = std::abs(m.mae - mae) <= 1e-12 && std::abs(m.rmse - rmse) <= 1e-12 &&
                        std::abs(m.r2 - r2) <= 1e-12;
  Rng rng(6);
  int ordered = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.index(50);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal(10, 5);
      b[i] = rng.normal(10, 5);
    }
    const auto r = ssl::evaluate(a, b);
    if (r.rmse >= r.mae * (1 - 1e-15)) ++ordered;
  }
  return {fixed_ok && ordered == 1000,
          "fixed vectors " + std::string(fixed_ok ? "match" : "differ") + " (MAE " + fmt(m.mae, 6) +
              ", RMSE " + fmt(m.rmse, 6) + ", R2 " + fmt(m.r2, 6) + "); RMSE >= MAE in " +
              std::to_string(ordered) + "/1000"};
}

// ------------------------------------------------------------------ 7

Outcome linear_recovery(const Options&) {
  const std::size_t n = 200, m = 10;
  Rng rng(7);
  std::vector<double> w(m);
  for (auto& x : w) x = rng.uniform(-2, 2);
  ssl::LabeledDataset d;
  d.X = ssl::Matrix(n, m);
  d.manifest_hash = "linear";
  std::vector<double> flat;
  for (std::size_t i = 0; i < n; ++i) {
    double y = 100.0;
    for (std::size_t j = 0; j < m; ++j) {
      d.X(i, j) = rng.normal(0, 1.0 + 0.2 * j);
      y += w[j] * d.X(i, j);
      flat.push_back(d.X(i, j));
    }
    d.y.push_back(y);
    d.building_ids.push_back("b" + std::to_string(i));
    d.source.push_back(ssl::LabelSource::RAW);
  }
  ssl::ModelSpec spec;
  spec.kind = ssl::ModelKind::linear_gd;
  const auto model = ssl::train(spec, d);
  const auto [coef, intercept] = ssl::linear_coefficients(model);
  const auto ref = oracle::ols(flat, n, m, d.y);
  double worst = std::abs(intercept - ref[0]);
  for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, std::abs(coef[j] - ref[j + 1]));
  const auto& trace = dynamic_cast<const ssl::LinearRegressor&>(model.regressor()).loss_trace();
  bool monotone = !trace.empty();
  for (std::size_t k = 1; k < trace.size(); ++k) monotone = monotone && trace[k] <= trace[k - 1];
  return {worst <= 1e-3 && monotone, "max |coef - OLS| = " + std::to_string(worst) + ", " +
                                         std::to_string(trace.size() - 1) + " epochs, loss " +
                                         (monotone ? "non-increasing" : "increased")};
}

// ------------------------------------------------------------- 8 and 9

// Feature matrix of a large synthetic city.
morphometry::FeatureMatrix experiment_city(const fs::path& dir) {
  pipeline::SyntheticCitySpec spec;
  spec.seed = 8;
  spec.grid_blocks = 12;
  spec.buildings_per_block = 20;
  pipeline::generate_synthetic_city(spec).write(dir);
  pipeline::stage_features(dir / "buildings.geojson", dir / "streets.geojson", {}, dir / "run");
  return morphometry::FeatureMatrix::read(dir / "run" / "features.csv", dir / "run" / "manifest.json");
}

// Random linear function of the standardized columns, scaled to `sd`.
std::vector<double> linear_signal(const morphometry::FeatureMatrix& fm,
                                  std::span<const std::size_t> cols, double sd, Rng& rng) {
  const std::size_t n = fm.rows();
  std::vector<double> s(n, 0.0);
  for (std::size_t c : cols) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < n; ++i) mean += fm.at(i, c);
    mean /= n;
    for (std::size_t i = 0; i < n; ++i) var += (fm.at(i, c) - mean) * (fm.at(i, c) - mean);
    const double scale = std::sqrt(var / n);
    if (scale == 0) continue;
    const double w = rng.normal();
    for (std::size_t i = 0; i < n; ++i) s[i] += w * (fm.at(i, c) - mean) / scale;
  }
  double mean = 0, var = 0;
  for (double v : s) mean += v;
  mean /= n;
  for (double v : s) var += (v - mean) * (v - mean);
  const double k = sd / std::sqrt(var / n);
  for (double& v : s) v = (v - mean) * k;
  return s;
}

struct Labelled {
  std::vector<ssl::HeightLabel> raw;
  std::vector<ssl::HeightLabel> pseudo;
};

// Reference heights, and pseudo-labels from quantizing them to 2.5 m floors
// with a one-floor miscount at probability `p`.
Labelled make_labels(const morphometry::FeatureMatrix& fm, std::span<const double> truth, double p,
                     Rng& rng) {
  Labelled l;
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    const double h = std::max(2.5, truth[i]);
    l.raw.push_back({fm.building_ids()[i], h});
    int floors = std::max(1, static_cast<int>(std::lround(h / 2.5)));
    if (rng.bernoulli(p)) floors = std::max(1, floors + (rng.bernoulli(0.5) ? 1 : -1));
    l.pseudo.push_back({fm.building_ids()[i], floors::floors_to_height(floors, geodata::BuildingFunction::residential)});
  }
  return l;
}

ssl::ExperimentConfig forest_experiment() {
  ssl::ExperimentConfig cfg;
  ssl::ModelSpec rf;
  rf.kind = ssl::ModelKind::random_forest;
  rf.forest.n_trees = 100;
  cfg.kinds = {rf};
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  cfg.validation_size = 2000;
  cfg.raw_budget = 300;
  cfg.svi_budget = 300;
  cfg.mix_a = 0.5;
  return cfg;
}

std::map<std::string, std::vector<double>> mae_by(const ssl::ExperimentReport& r,
                                                  const std::function<std::string(const ssl::ExperimentRow&)>& key) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& row : r.rows) out[key(row)].push_back(row.mae);
  return out;
}

Outcome ssl_benefit(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto features = experiment_city(opt.work / "c8");
  Rng rng(8);
  std::vector<std::size_t> all_cols(features.cols());
  std::iota(all_cols.begin(), all_cols.end(), 0);
  auto truth = linear_signal(features, all_cols, 5.0, rng);
  for (double& h : truth) h += 15.0 + rng.normal(0.0, 1.0);
  const Labelled l = make_labels(features, truth, 0.2, rng);

  auto cfg = forest_experiment();
  cfg.sets = {ssl::TrainingSetKind::RAW, ssl::TrainingSetKind::SSL};
  const auto report = ssl::run_experiment(features, l.raw, l.pseudo, cfg);
  const double secs = elapsed(t0);
  auto by = mae_by(report, [](const ssl::ExperimentRow& r) { return r.set; });
  const auto& raw = by["RAW"];
  const auto& mix = by["SSL"];
  int wins = 0;
  for (std::size_t s = 0; s < raw.size(); ++s) wins += mix[s] < raw[s];
  std::size_t n_ssl = 0;
  for (const auto& row : report.rows) {
    if (row.set == "SSL") n_ssl = row.n_train;
  }
  const double med_raw = median(raw), med_ssl = median(mix);
  const bool ok = raw.size() == 10 && med_ssl <= med_raw && wins >= 8 && secs < 300.0;
  return {ok, std::to_string(features.rows()) + " buildings; median MAE RAW " + fmt(med_raw) +
                  " vs SSL " + fmt(med_ssl) + " (n=" + std::to_string(n_ssl) + "); SSL wins " +
                  std::to_string(wins) + "/10; " + fmt(secs, 1) + " s"};
}

Outcome feature_ablation(const Options& opt) {
  const auto features = experiment_city(opt.work / "c9");
  Rng rng(9);
  const auto bldg_cols = features.manifest().indices_at_level(morphometry::FeatureLevel::building);
  auto truth = linear_signal(features, bldg_cols, 5.0, rng);
  // A block effect: linear in the block's own descriptors, so constant
  // within each block.
  std::vector<std::size_t> block_cols;
  for (std::size_t c : features.manifest().indices_at_level(morphometry::FeatureLevel::block)) {
    if (features.manifest().entries[c].buffer_m == 0.0) block_cols.push_back(c);
  }
  const auto block_effect = linear_signal(features, block_cols, 4.0, rng);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] += 15.0 + block_effect[i] + rng.normal(0.0, 1.0);
  }
  const Labelled l = make_labels(features, truth, 0.2, rng);

  auto cfg = forest_experiment();
  cfg.sets = {ssl::TrainingSetKind::RAW};
  cfg.feature_subsets = {ssl::FeatureSubset::all, ssl::FeatureSubset::building};
  const auto report = ssl::run_experiment(features, l.raw, l.pseudo, cfg);
  auto by = mae_by(report, [](const ssl::ExperimentRow& r) { return r.features; });
  const auto& all = by["all"];
  const auto& bldg = by["building"];
  int wins = 0;
  for (std::size_t s = 0; s < all.size(); ++s) wins += all[s] <= bldg[s];
  const bool ok = all.size() == 10 && wins >= 8;
  return {ok, "median MAE all " + fmt(median(all)) + " vs building-only " + fmt(median(bldg)) +
                  "; all <= building in " + std::to_string(wins) + "/10 seeds"};
}

// ----------------------------------------------------------------- 10

// Volume of a closed polygonal surface from the vector area of each ring.
double surface_volume(const lod1::ParsedSolid& s) {
  double v = 0;
  for (const auto& face : s.faces) {
    for (const auto& ring : face) {
      double ax = 0, ay = 0, az = 0;
      for (std::size_t k = 0; k < ring.size(); ++k) {
        const auto& p = s.vertices[ring[k]];
        const auto& q = s.vertices[ring[(k + 1) % ring.size()]];
        ax += p.y * q.z - p.z * q.y;
        ay += p.z * q.x - p.x * q.z;
        az += p.x * q.y - p.y * q.x;
      }
      const auto& p0 = s.vertices[ring[0]];
      v += (ax * p0.x + ay * p0.y + az * p0.z) / 6.0;
    }
  }
  return v;
}

std::vector<Footprint> awkward_footprints() {
  std::vector<Footprint> out;
  // L-shape.
  out.push_back(Footprint::create(
      "L", {{{300, 0}, {320, 0}, {320, 8}, {308, 8}, {308, 25}, {300, 25}, {300, 0}}, {}}));
  // Courtyard block.
  out.push_back(Footprint::create(
      "court", {{{340, 0}, {370, 0}, {370, 30}, {340, 30}, {340, 0}},
                {{{350, 10}, {350, 20}, {360, 20}, {360, 10}, {350, 10}}}}));
  // Comb with collinear vertices on the long side.
  out.push_back(Footprint::create(
      "comb", {{{400, 0}, {410, 0}, {420, 0}, {430, 0}, {430, 20}, {425, 20}, {425, 6}, {420, 6},
                {420, 20}, {410, 20}, {410, 6}, {405, 6}, {405, 20}, {400, 20}, {400, 0}},
               {}}));
  return out;
}

Outcome lod1_export(const Options& opt) {
  const auto city = pipeline::generate_synthetic_city({});
  const fs::path dir = opt.work / "c10";
  city.write(dir);
  auto scene = pipeline::load_scene(dir / "buildings.geojson");
  std::map<std::string, double> heights;
  for (const auto& t : city.truth) heights[t.id] = t.height;
  for (auto& f : awkward_footprints()) {
    heights[f.id] = 12.5;
    scene.footprints.push_back(std::move(f));
  }
  const auto build = lod1::build_city_model(scene.footprints, heights, {}, scene.projection.origin());
  const fs::path cj = dir / "city.json", obj = dir / "city.obj";
  lod1::export_cityjson(build.model, cj);
  lod1::export_obj(build.model, obj);

  // Schema validation through the reference validator.
  bool schema_ok = false;
  std::string schema_note = "validator not configured";
  if (!opt.validator.empty()) {
    const std::string cmd = opt.python + " \"" + opt.validator.string() + "\" \"" + cj.string() +
                            "\" > \"" + (dir / "validator.txt").string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    schema_ok = rc == 0;
    schema_note = schema_ok ? "schema valid" : "validator: " + read_text_file(dir / "validator.txt");
  }

  std::map<std::string, double> expected;
  for (const auto& s : build.model.solids) expected[s.building_id] = s.footprint_area() * s.height;
  std::size_t vol_bad = 0;
  double worst = 0;
  const auto parsed = lod1::read_cityjson(cj);
  for (const auto& p : parsed) {
    const double err = std::abs(surface_volume(p) - expected.at(p.building_id));
    worst = std::max(worst, err);
    if (err > 1e-3) ++vol_bad;
  }
  std::size_t not_watertight = 0;
  const auto objects = lod1::read_obj(obj);
  for (const auto& o : objects) {
    std::vector<std::array<std::size_t, 3>> tris(o.triangles.begin(), o.triangles.end());
    if (!oracle::edge_manifold(tris)) ++not_watertight;
  }
  const bool ok = schema_ok && parsed.size() == expected.size() && vol_bad == 0 &&
                  objects.size() == expected.size() && not_watertight == 0;
  return {ok, schema_note + "; " + std::to_string(parsed.size()) + " solids, max volume error " +
                  std::to_string(worst) + " m3; OBJ objects not watertight: " +
                  std::to_string(not_watertight) + "/" + std::to_string(objects.size())};
}

// ----------------------------------------------------------------- 11

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string text = read_text_file(e.path());
    if (e.path().filename() == "run_manifest.json") {
      auto j = nlohmann::json::parse(text);
      j.erase("timings");
      text = j.dump(2);
    }
    out[fs::relative(e.path(), dir).string()] = std::move(text);
  }
  return out;
}

Outcome determinism(const Options& opt) {
  const fs::path dir = opt.work / "c11";
  pipeline::SyntheticCitySpec spec;
  spec.seed = 21;
  spec.pseudo_error_p = 0.2;
  const auto city = pipeline::generate_synthetic_city(spec);
  city.write(dir);
  std::vector<ssl::HeightLabel> raw = city.truth_labels();
  raw.resize(raw.size() / 3);
  ssl::write_height_labels_csv(dir / "raw_labels.csv", raw);

  pipeline::PipelineConfig cfg;
  cfg.paths.buildings = dir / "buildings.geojson";
  cfg.paths.streets = dir / "streets.geojson";
  cfg.paths.cameras = dir / "cameras.jsonl";
  cfg.paths.detections = dir / "detections.jsonl";
  cfg.paths.raw_labels = dir / "raw_labels.csv";
  cfg.paths.out_dir = dir / "run";
  cfg.regression.model.forest.n_trees = 50;
  cfg.format = pipeline::ExportFormat::both;
  cfg.seed = 5;

  pipeline::run_pipeline(cfg);
  const auto first = snapshot(cfg.paths.out_dir);
  fs::remove_all(cfg.paths.out_dir);
  cfg.morphometry.threads = 3;  // scheduling must not matter
  cfg.regression.model.forest.threads = 3;
  pipeline::run_pipeline(cfg);
  auto second = snapshot(cfg.paths.out_dir);

  std::vector<std::string> differ;
  std::set<std::string> names;
  for (const auto& [k, v] : first) names.insert(k);
  for (const auto& [k, v] : second) names.insert(k);
  for (const auto& k : names) {
    if (!first.contains(k) || !second.contains(k) || first.at(k) != second.at(k)) differ.push_back(k);
  }
  std::string d = std::to_string(names.size()) + " output files, " + std::to_string(differ.size()) +
                  " differ";
  for (const auto& k : differ) d += " " + k;
  return {differ.empty() && names.size() >= 8, d};
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << a << " needs a value\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (a == "--validator") {
      opt.validator = value();
    } else if (a == "--python") {
      opt.python = value();
    } else if (a == "--only") {
      only.insert(std::stoi(value()));
    } else if (a == "--work") {
      opt.work = value();
    } else {
      std::cerr << "unknown argument " << a << "\n";
      return 2;
    }
  }
  fs::remove_all(opt.work);
  fs::create_directories(opt.work);

  const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria = {
      {"morphometry oracle", morphometry_oracle},
      {"polygonization", polygonization},
      {"ray casting", ray_casting},
      {"floor estimation", floor_estimation},
      {"height conversion", height_conversion},
      {"metrics", metrics},
      {"linear regression recovery", linear_recovery},
      {"ssl benefit", ssl_benefit},
      {"feature-count ablation", feature_ablation},
      {"lod1 export", lod1_export},
      {"end-to-end determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int n = static_cast<int>(k + 1);
    if (!only.empty() && !only.contains(n)) continue;
    Outcome o;
    try {
      o = criteria[k].second(opt);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << criteria[k].first
              << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
