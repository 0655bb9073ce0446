// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "osmheight/ssl/model.hpp"

namespace osmheight::ssl {

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;
};

/// Fully connected ReLU network with a linear scalar output, trained with
/// mini-batch SGD and momentum on the standardized target.
class DenseRegressor : public Regressor {
 public:
  DenseRegressor(std::vector<DenseLayer> layers, double y_mean, double y_scale);

  static DenseRegressor fit(const Matrix& Z, std::span<const double> y, const DenseParams& p,
                            std::uint64_t seed);
  static DenseRegressor from_json(const nlohmann::json& j);

  double predict(std::span<const double> z) const override;
  nlohmann::json to_json() const override;
  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  std::vector<DenseLayer> layers_;
  double y_mean_;
  double y_scale_;
};

}  // namespace osmheight::ssl
