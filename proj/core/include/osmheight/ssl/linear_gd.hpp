// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "osmheight/ssl/model.hpp"

namespace osmheight::ssl {

/// y = bias + w . z fitted by full-batch gradient descent. A step that
/// would raise the loss is rejected and the learning rate halved, so
/// loss_trace (initial loss, then one entry per epoch) never increases.
class LinearRegressor : public Regressor {
 public:
  LinearRegressor(std::vector<double> weights, double bias, std::vector<double> loss_trace = {});

  static LinearRegressor fit(const Matrix& Z, std::span<const double> y, const LinearParams& p);
  static LinearRegressor from_json(const nlohmann::json& j);

  double predict(std::span<const double> z) const override;
  nlohmann::json to_json() const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const std::vector<double>& loss_trace() const { return loss_trace_; }

 private:
  std::vector<double> weights_;
  double bias_;
  std::vector<double> loss_trace_;
};

/// Coefficients and intercept of a linear_gd model in unstandardized
/// feature units (constant columns get 0).
std::pair<std::vector<double>, double> linear_coefficients(const TrainedModel& model);

}  // namespace osmheight::ssl
