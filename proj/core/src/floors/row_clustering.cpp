// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/floors/row_clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "osmheight/errors.hpp"

namespace osmheight::floors {
namespace {

double sse(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TwoMeansSplit two_means_1d(std::span<const double> v) {
  TwoMeansSplit best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s < v.size(); ++s) {
    if (v[s - 1] == v[s]) continue;
    const double w = sse(v.subspan(0, s)) + sse(v.subspan(s));
    if (w < best.wcss) best = {s, w};
  }
  if (best.split == 0) best.wcss = sse(v);
  return best;
}

RowClustering cluster_rows(const DetectionSet& d, const ClusterOptions& options) {
  RowClustering out;
  for (std::size_t i = 0; i < d.detections.size(); ++i) {
    const auto& det = d.detections[i];
    if (det.cls != DetectionClass::balcony && det.confidence >= options.min_confidence) {
      out.order.push_back(i);
    }
  }
  if (out.order.empty()) throw NoDetectionsError("no windows or doors retained in " + d.image_id);
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return d.detections[a].y_center() < d.detections[b].y_center();
  });

  for (std::size_t k = 0; k + 1 < out.order.size(); ++k) {
    out.gap_values.push_back(d.detections[out.order[k + 1]].y_center() -
                             d.detections[out.order[k]].y_center());
  }
  out.gap_partition.assign(out.gap_values.size(), false);

  if (!out.gap_values.empty()) {
    std::vector<double> sorted = out.gap_values;
    std::sort(sorted.begin(), sorted.end());
    const double min_gap = sorted.front();
    const double max_gap = sorted.back();

    std::vector<double> heights;
    for (std::size_t i : out.order) {
      if (d.detections[i].cls == DetectionClass::window) heights.push_back(d.detections[i].height());
    }
    if (heights.empty()) {
      for (std::size_t i : out.order) heights.push_back(d.detections[i].height());
    }
    const double typical_height = median(heights);

    const TwoMeansSplit split = two_means_1d(sorted);
    // Uniform gaps carry no two-cluster structure. Gaps all larger than an
    // object are all row gaps; gaps all smaller than one are all in-row.
    out.fallback = out.order.size() <= 2 || split.split == 0 ||
                   max_gap < options.degenerate_ratio * min_gap || min_gap > typical_height ||
                   max_gap <= typical_height;
    if (out.fallback) {
      out.threshold = typical_height;
      for (std::size_t k = 0; k < out.gap_values.size(); ++k) {
        out.gap_partition[k] = out.gap_values[k] > out.threshold;
      }
    } else {
      const double cut = sorted[split.split];
      for (std::size_t k = 0; k < out.gap_values.size(); ++k) {
        out.gap_partition[k] = out.gap_values[k] >= cut;
      }
    }
  }

  out.rows.emplace_back();
  for (std::size_t k = 0; k < out.order.size(); ++k) {
    if (k > 0 && out.gap_partition[k - 1]) out.rows.emplace_back();
    out.rows.back().push_back(out.order[k]);
  }
  return out;
}

}  // namespace osmheight::floors
