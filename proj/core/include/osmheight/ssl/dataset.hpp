// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osmheight/morphometry/manifest.hpp"
#include "osmheight/ssl/matrix.hpp"

namespace osmheight::ssl {

enum class LabelSource { RAW, SVI };
std::string to_string(LabelSource s);

struct HeightLabel {
  std::string building_id;
  double height = 0.0;
};

struct LabeledDataset {
  std::vector<std::string> building_ids;
  Matrix X;
  std::vector<double> y;
  std::vector<LabelSource> source;
  std::string manifest_hash;

  std::size_t size() const { return y.size(); }
  /// Throws ContractError if sizes disagree or a height is not positive.
  void validate() const;
  LabeledDataset subset(std::span<const std::size_t> rows) const;
  std::size_t count(LabelSource s) const;
};

/// Rows of `features` for the labelled buildings, in label order. Labels
/// whose building is not in the matrix are skipped and listed in `missing`.
LabeledDataset make_dataset(const morphometry::FeatureMatrix& features,
                            std::span<const HeightLabel> labels, LabelSource source,
                            std::vector<std::string>* missing = nullptr);

/// Copy of `features` restricted to one level's columns, with its own
/// manifest (and hash).
morphometry::FeatureMatrix select_level(const morphometry::FeatureMatrix& features,
                                        morphometry::FeatureLevel level);

struct TrainingMix {
  double a = 0.5;  // fraction of pseudo-labelled rows
  std::uint64_t seed = 0;
};

/// round((1 - a) n) RAW rows plus round(a n) SVI rows, each sampled without
/// replacement. n defaults to the largest size the pools can supply. Pseudo
/// rows for buildings that also have a RAW label are dropped first. Throws
/// AvailabilityError when a pool is too small for `target_size`.
LabeledDataset assemble_training_set(const LabeledDataset& raw, const LabeledDataset& pseudo,
                                     const TrainingMix& mix,
                                     std::optional<std::size_t> target_size = std::nullopt);

/// Shuffled split; the first part holds round(ratio * n) rows. Requires at
/// least 10 rows.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& d, double ratio,
                                                std::uint64_t seed);

}  // namespace osmheight::ssl
