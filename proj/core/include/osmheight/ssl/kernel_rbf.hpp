// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "osmheight/ssl/model.hpp"

namespace osmheight::ssl {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// f(z) = offset + sum_i coef_i k(z, support_i) with an RBF kernel.
class KernelRegressor : public Regressor {
 public:
  KernelRegressor(Matrix support, std::vector<double> coef, double gamma, double offset);

  /// Kernel ridge: (K + lambda I) alpha = y - mean(y), offset = mean(y).
  static KernelRegressor fit_ridge(const Matrix& Z, std::span<const double> y,
                                   const KernelParams& p);
  /// Epsilon-SVR on the centred target, solved by sequential minimal
  /// optimisation with second-order working-set selection.
  static KernelRegressor fit_svr(const Matrix& Z, std::span<const double> y,
                                 const KernelParams& p);
  static KernelRegressor from_json(const nlohmann::json& j);

  double predict(std::span<const double> z) const override;
  nlohmann::json to_json() const override;

  const Matrix& support() const { return support_; }
  const std::vector<double>& coef() const { return coef_; }
  double gamma() const { return gamma_; }
  double offset() const { return offset_; }

 private:
  Matrix support_;
  std::vector<double> coef_;
  double gamma_;
  double offset_;
};

}  // namespace osmheight::ssl
