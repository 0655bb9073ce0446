// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "osmheight/ssl/matrix.hpp"

namespace osmheight::ssl {

/// Per-column z-score fitted on training rows. Columns with zero spread map
/// to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // population std; 0 for constant columns

  static Standardizer fit(const Matrix& X);
  std::vector<double> transform_row(std::span<const double> row) const;
  Matrix transform(const Matrix& X) const;

  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);
};

}  // namespace osmheight::ssl
