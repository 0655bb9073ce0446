// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "osmheight/errors.hpp"
#include "osmheight/floors/detection.hpp"
#include "osmheight/floors/floor_estimate.hpp"
#include "osmheight/floors/row_clustering.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/random.hpp"
#include "small_oracles.hpp"
#include "test_support.hpp"

namespace osmheight::floors {
namespace {

using geodata::BuildingFunction;
using nlohmann::json;

const std::filesystem::path kData = OSMHEIGHT_TEST_DATA_DIR;

Detection box(DetectionClass cls, double y_center, double half_height = 10.0, double x = 100.0,
              double confidence = 0.9) {
  return {cls, x, y_center - half_height, x + 40.0, y_center + half_height, confidence};
}

DetectionSet facade(const std::vector<double>& window_centres, double image_height = 2000.0) {
  DetectionSet d{"img", 1000, static_cast<int>(image_height), {}};
  for (double y : window_centres) d.detections.push_back(box(DetectionClass::window, y));
  return d;
}

std::size_t row_count(const DetectionSet& d, const ClusterOptions& o = {}) {
  return cluster_rows(d, o).rows.size();
}

// ------------------------------------------------------------ detections

TEST(Detections, FixtureParsesAndRoundTrips) {
  const auto sets = read_detections_jsonl(kData / "detections.jsonl");
  ASSERT_EQ(sets.size(), 3u);
  EXPECT_EQ(sets[0].image_id, "498763468214164");
  EXPECT_EQ(sets[0].image_width_px, 1024);
  EXPECT_EQ(sets[0].detections.size(), 12u);
  EXPECT_EQ(sets[0].detections[9].cls, DetectionClass::door);
  EXPECT_EQ(sets[0].detections[10].cls, DetectionClass::balcony);

  const auto dir = osmheight::testing::scratch_dir("det");
  write_detections_jsonl(dir / "out.jsonl", sets);
  const auto back = read_detections_jsonl(dir / "out.jsonl");
  ASSERT_EQ(back.size(), sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) EXPECT_EQ(to_json(back[i]), to_json(sets[i]));
}

TEST(Detections, FixtureFloorCounts) {
  const auto sets = read_detections_jsonl(kData / "detections.jsonl");
  const auto e0 = estimate_floors(cluster_rows(sets[0]), sets[0]);
  EXPECT_EQ(e0.window_rows, 3);
  EXPECT_TRUE(e0.door_adjusted);
  EXPECT_EQ(e0.floors, 4);
  const auto e1 = estimate_floors(cluster_rows(sets[1]), sets[1]);
  EXPECT_EQ(e1.window_rows, 2);
  EXPECT_FALSE(e1.door_adjusted);
  EXPECT_EQ(e1.floors, 2);
  const auto e2 = estimate_floors(cluster_rows(sets[2]), sets[2]);
  EXPECT_EQ(e2.window_rows, 0);
  EXPECT_EQ(e2.floors, 1);
}

std::string parse_error_field(const json& j) {
  try {
    parse_detection_set(j);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(Detections, SchemaViolationsNameTheField) {
  const json good = {{"image_id", "x"},
                     {"image_width_px", 100},
                     {"image_height_px", 80},
                     {"detections", {{{"class", "window"}, {"bbox", {10, 10, 20, 20}}, {"confidence", 0.7}}}}};
  EXPECT_EQ(parse_error_field(good), "<no error>");
  auto with = [&](const std::string& key, json v) {
    json j = good;
    j["detections"][0][key] = std::move(v);
    return j;
  };
  EXPECT_EQ(parse_error_field(with("bbox", {10, 10, 120, 20})), "bbox");
  EXPECT_EQ(parse_error_field(with("bbox", {20, 10, 10, 20})), "bbox");
  EXPECT_EQ(parse_error_field(with("bbox", {10, 30, 20, 30})), "bbox");
  EXPECT_EQ(parse_error_field(with("bbox", {10, 10, 20})), "bbox");
  EXPECT_EQ(parse_error_field(with("bbox", {-1, 10, 20, 20})), "bbox");
  EXPECT_EQ(parse_error_field(with("confidence", 1.5)), "confidence");
  EXPECT_EQ(parse_error_field(with("confidence", "high")), "confidence");
  EXPECT_EQ(parse_error_field(with("class", "chimney")), "class");
  json j = good;
  j.erase("image_height_px");
  EXPECT_EQ(parse_error_field(j), "image_height_px");
  j = good;
  j["image_width_px"] = 0;
  EXPECT_EQ(parse_error_field(j), "image_width_px");
  j = good;
  j.erase("image_id");
  EXPECT_EQ(parse_error_field(j), "image_id");
  j = good;
  j["detections"] = "none";
  EXPECT_EQ(parse_error_field(j), "detections");
}

// ------------------------------------------------------------ clustering

TEST(Clustering, WorkedExamples) {
  const auto r = cluster_rows(facade({100, 102, 200, 201, 302}));
  EXPECT_EQ(r.gap_values, (std::vector<double>{2, 98, 1, 101}));
  EXPECT_EQ(r.gap_partition, (std::vector<bool>{false, true, false, true}));
  EXPECT_EQ(r.rows.size(), 3u);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(row_count(facade({400})), 1u);
  EXPECT_EQ(row_count(facade({50, 51, 52, 150, 151, 152})), 2u);
}

TEST(Clustering, NoRetainedDetectionsThrows) {
  DetectionSet d{"img", 100, 100, {box(DetectionClass::balcony, 50)}};
  EXPECT_THROW(cluster_rows(d), NoDetectionsError);
  d.detections = {box(DetectionClass::window, 50, 10, 10, 0.2)};
  EXPECT_THROW(cluster_rows(d), NoDetectionsError);
}

TEST(Clustering, UniformGapsFallBackToWindowHeight) {
  // Evenly spaced rows: every gap is alike, so k-means has nothing to split.
  const auto spread = cluster_rows(facade({100, 200, 300, 400}));
  EXPECT_TRUE(spread.fallback);
  EXPECT_EQ(spread.rows.size(), 4u);
  const auto packed = cluster_rows(facade({100, 105, 110, 115}));
  EXPECT_TRUE(packed.fallback);
  EXPECT_EQ(packed.rows.size(), 1u);
  const auto pair = cluster_rows(facade({100, 300}));
  EXPECT_TRUE(pair.fallback);
  EXPECT_EQ(pair.rows.size(), 2u);
}

DetectionSet random_facade(Rng& rng, int rows, double spacing) {
  std::vector<double> ys;
  for (int r = 0; r < rows; ++r) {
    const int per_row = 1 + static_cast<int>(rng.index(5));
    for (int k = 0; k < per_row; ++k) ys.push_back(100.0 + r * spacing + rng.uniform(-3, 3));
  }
  return facade(ys, 100.0 + rows * spacing + 200.0);
}

TEST(Clustering, RowsPartitionAndRespectSeparators) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    auto d = random_facade(rng, 1 + static_cast<int>(rng.index(8)), rng.uniform(40, 200));
    for (auto& det : d.detections) det.confidence = rng.uniform(0.3, 1.0);
    if (rng.bernoulli(0.3)) d.detections.push_back(box(DetectionClass::balcony, rng.uniform(50, 300)));
    RowClustering r;
    try {
      r = cluster_rows(d);
    } catch (const NoDetectionsError&) {
      continue;
    }
    std::vector<std::size_t> seen;
    for (const auto& row : r.rows) {
      ASSERT_FALSE(row.empty());
      seen.insert(seen.end(), row.begin(), row.end());
    }
    std::vector<std::size_t> want = r.order;
    std::sort(seen.begin(), seen.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(seen, want);
    for (std::size_t i : r.order) {
      EXPECT_NE(d.detections[i].cls, DetectionClass::balcony);
      EXPECT_GE(d.detections[i].confidence, 0.5);
    }
    if (r.fallback) continue;
    double min_sep = 1e300;
    for (std::size_t g = 0; g < r.gap_values.size(); ++g) {
      if (r.gap_partition[g]) min_sep = std::min(min_sep, r.gap_values[g]);
    }
    for (const auto& row : r.rows) {
      double lo = 1e300, hi = -1e300;
      for (std::size_t i : row) {
        lo = std::min(lo, d.detections[i].y_center());
        hi = std::max(hi, d.detections[i].y_center());
      }
      EXPECT_LT(hi - lo, min_sep);
    }
  }
}

TEST(Clustering, AddingALowerRowAddsOneFloor) {
  Rng rng(32);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = 1 + static_cast<int>(rng.index(7));
    const double spacing = rng.uniform(60, 200);
    auto d = random_facade(rng, rows, spacing);
    const auto before = estimate_floors(cluster_rows(d), d);
    const double y = 100.0 + rows * spacing;
    const int extra = 1 + static_cast<int>(rng.index(4));
    for (int k = 0; k < extra; ++k) d.detections.push_back(box(DetectionClass::window, y + rng.uniform(-3, 3)));
    const auto after = estimate_floors(cluster_rows(d), d);
    EXPECT_EQ(after.floors, before.floors + 1) << "rows " << rows << " spacing " << spacing;
  }
}

TEST(Clustering, RowCountIsScaleInvariant) {
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = random_facade(rng, 1 + static_cast<int>(rng.index(8)), rng.uniform(40, 200));
    const std::size_t base = row_count(d);
    for (double s : {0.5, 2.0, 3.7}) {
      DetectionSet scaled = d;
      scaled.image_height_px = static_cast<int>(d.image_height_px * s) + 1;
      for (auto& det : scaled.detections) {
        det.ymin *= s;
        det.ymax *= s;
      }
      EXPECT_EQ(row_count(scaled), base) << "scale " << s;
    }
  }
}

TEST(Clustering, TwoMeansMatchesExhaustivePartition) {
  Rng rng(34);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng.index(11);
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(trial % 3 == 0 ? static_cast<double>(rng.index(5)) : rng.uniform(0, 100));
    }
    std::sort(v.begin(), v.end());
    const auto got = two_means_1d(v);
    EXPECT_NEAR(got.wcss, oracle::exhaustive_two_partition_wcss(v), 1e-9);
  }
}

TEST(Clustering, LowerConfidenceThresholdNeverRetainsFewer) {
  Rng rng(35);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = random_facade(rng, 1 + static_cast<int>(rng.index(6)), 100.0);
    for (auto& det : d.detections) det.confidence = rng.uniform();
    std::size_t prev = 0;
    for (double c = 1.0; c >= -1e-12; c -= 0.1) {
      std::size_t kept = 0;
      try {
        kept = cluster_rows(d, {c, 1.5}).order.size();
      } catch (const NoDetectionsError&) {
      }
      EXPECT_GE(kept, prev);
      prev = kept;
    }
  }
}

// --------------------------------------------------------------- floors

TEST(Floors, DoorRules) {
  // Three window rows with a door overlapping the bottom band.
  DetectionSet d = facade({100, 100, 200, 200, 300, 300});
  d.detections.push_back({DetectionClass::door, 500, 280, 540, 360, 0.9});
  auto e = estimate_floors(cluster_rows(d), d);
  EXPECT_EQ(e.floors, 3);
  EXPECT_FALSE(e.door_adjusted);

  // Two window rows, door strictly below both.
  d = facade({100, 100, 200, 200});
  d.detections.push_back({DetectionClass::door, 500, 280, 540, 380, 0.9});
  e = estimate_floors(cluster_rows(d), d);
  EXPECT_EQ(e.window_rows, 2);
  EXPECT_TRUE(e.door_adjusted);
  EXPECT_EQ(e.floors, 3);

  d = facade({});
  d.detections.push_back({DetectionClass::door, 500, 280, 540, 380, 0.9});
  e = estimate_floors(cluster_rows(d), d);
  EXPECT_EQ(e.window_rows, 0);
  EXPECT_EQ(e.floors, 1);
}

TEST(Floors, HeightPerFunction) {
  EXPECT_DOUBLE_EQ(floors_to_height(4, BuildingFunction::residential), 10.0);
  EXPECT_DOUBLE_EQ(floors_to_height(3, BuildingFunction::commercial_public), 10.5);
  EXPECT_DOUBLE_EQ(floors_to_height(1, BuildingFunction::unknown), 2.5);
  FloorHeights h;
  h.unknown = 3.0;
  EXPECT_DOUBLE_EQ(floors_to_height(2, BuildingFunction::unknown, h), 6.0);
  EXPECT_THROW(floors_to_height(0, BuildingFunction::residential), DomainError);
  EXPECT_THROW(floors_to_height(-2, BuildingFunction::unknown), DomainError);
}

// --------------------------------------------------------- pseudo labels

DetectionSet rows_image(const std::string& id, int rows) {
  std::vector<double> ys;
  for (int r = 0; r < rows; ++r) ys.insert(ys.end(), {100.0 + 150 * r, 100.0 + 150 * r});
  auto d = facade(ys);
  d.image_id = id;
  return d;
}

TEST(PseudoLabels, CompositionMedianAndSkips) {
  std::vector<geodata::Footprint> buildings{
      osmheight::testing::footprint("res", osmheight::testing::rect_ring(0, 0, 10, 10)),
      geodata::Footprint::create("shop", {osmheight::testing::rect_ring(20, 0, 30, 10), {}},
                                 BuildingFunction::commercial_public),
      osmheight::testing::footprint("pair", osmheight::testing::rect_ring(40, 0, 50, 10))};
  std::map<std::string, DetectionSet> det;
  for (auto [id, rows] : std::vector<std::pair<std::string, int>>{
           {"i1", 2}, {"i2", 3}, {"i3", 3}, {"i4", 2}, {"i5", 2}, {"i6", 3}}) {
    det[id] = rows_image(id, rows);
  }
  det["empty"] = DetectionSet{"empty", 100, 100, {box(DetectionClass::balcony, 50)}};

  const std::vector<svi::Assignment> asg{
      {"i1", "res", {}, 10}, {"i2", "res", {}, 10}, {"i3", "res", {}, 10},   // 5.0, 7.5, 7.5
      {"i4", "shop", {}, 10},                                              // 7.0
      {"i5", "pair", {}, 10}, {"i6", "pair", {}, 10},                      // 5.0, 7.5
      {"missing", "res", {}, 10}, {"i1", "ghost", {}, 10}, {"empty", "res", {}, 10}};
  const auto res = make_pseudo_labels(asg, det, buildings);

  ASSERT_EQ(res.labels.size(), 3u);
  EXPECT_EQ(res.labels[0].building_id, "pair");
  EXPECT_DOUBLE_EQ(res.labels[0].height, 5.0);
  EXPECT_EQ(res.labels[0].n_images, 2u);
  EXPECT_EQ(res.labels[1].building_id, "res");
  EXPECT_DOUBLE_EQ(res.labels[1].height, 7.5);
  EXPECT_EQ(res.labels[1].floors, 3);
  EXPECT_EQ(res.labels[2].building_id, "shop");
  EXPECT_DOUBLE_EQ(res.labels[2].height, 7.0);
  EXPECT_EQ(res.labels[2].function_used, BuildingFunction::commercial_public);

  EXPECT_EQ(res.report.assignments, asg.size());
  EXPECT_EQ(res.report.estimated, 6u);
  EXPECT_EQ(res.report.labels, 3u);
  EXPECT_EQ(res.report.skipped.at("missing_detections"), 1u);
  EXPECT_EQ(res.report.skipped.at("unknown_building"), 1u);
  EXPECT_EQ(res.report.skipped.at("no_detections"), 1u);
  for (const auto& l : res.labels) {
    EXPECT_GT(l.height, 0.0);
    EXPECT_DOUBLE_EQ(l.height, floors_to_height(l.floors, l.function_used));
  }
}

TEST(PseudoLabels, CsvRoundTrip) {
  const std::vector<PseudoLabel> in{{"a", 7.5, 3, BuildingFunction::residential, 2},
                                    {"b#1", 10.5, 3, BuildingFunction::commercial_public, 1}};
  const auto dir = osmheight::testing::scratch_dir("csv");
  write_pseudo_labels_csv(dir / "p.csv", in);
  const auto out = read_pseudo_labels_csv(dir / "p.csv");
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(out[i].building_id, in[i].building_id);
    EXPECT_EQ(out[i].height, in[i].height);
    EXPECT_EQ(out[i].floors, in[i].floors);
    EXPECT_EQ(out[i].function_used, in[i].function_used);
  }
}

}  // namespace
}  // namespace osmheight::floors
