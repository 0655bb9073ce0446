// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "osmheight/floors/detection.hpp"

namespace osmheight::floors {

/// Best split of sorted values into a low run [0, split) and a high run
/// [split, n) by total within-cluster sum of squares. Splits only fall
/// between distinct values; split == 0 means no valid split exists.
struct TwoMeansSplit {
  std::size_t split = 0;
  double wcss = 0.0;
};
TwoMeansSplit two_means_1d(std::span<const double> sorted_values);

struct RowClustering {
  /// Top-to-bottom rows of indices into DetectionSet::detections.
  std::vector<std::vector<std::size_t>> rows;
  /// Retained detections sorted by vertical centre.
  std::vector<std::size_t> order;
  /// gap_values[i] lies between order[i] and order[i + 1].
  std::vector<double> gap_values;
  std::vector<bool> gap_partition;  // true = row separator
  bool fallback = false;
  double threshold = 0.0;  // fallback threshold in px, when used
};

struct ClusterOptions {
  double min_confidence = 0.5;
  /// Gaps are treated as one cluster when max_gap < ratio * min_gap.
  double degenerate_ratio = 1.5;
};

/// Groups windows and doors into horizontal rows from the gaps between
/// consecutive vertical centres. Throws NoDetectionsError when nothing is
/// retained.
RowClustering cluster_rows(const DetectionSet& d, const ClusterOptions& options = {});

}  // namespace osmheight::floors
