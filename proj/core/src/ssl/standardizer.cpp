// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/standardizer.hpp"

#include <cmath>

#include "osmheight/errors.hpp"

namespace osmheight::ssl {

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  const std::size_t n = X.rows(), m = X.cols();
  s.mean.assign(m, 0.0);
  s.scale.assign(m, 0.0);
  if (n == 0) return s;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) s.mean[c] += X(r, c);
  }
  for (double& v : s.mean) v /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double d = X(r, c) - s.mean[c];
      s.scale[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    const double sd = std::sqrt(s.scale[c] / static_cast<double>(n));
    // Spread at rounding level of the mean counts as constant.
    s.scale[c] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[c])) ? sd : 0.0;
  }
  return s;
}

std::vector<double> Standardizer::transform_row(std::span<const double> row) const {
  if (row.size() != mean.size()) throw ContractError("feature row width does not match model");
  std::vector<double> z(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    z[c] = scale[c] > 0.0 ? (row[c] - mean[c]) / scale[c] : 0.0;
  }
  return z;
}

Matrix Standardizer::transform(const Matrix& X) const {
  Matrix out(X.rows(), X.cols());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto z = transform_row(X.row(r));
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

nlohmann::json Standardizer::to_json() const { return {{"mean", mean}, {"scale", scale}}; }

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.scale = j.at("scale").get<std::vector<double>>();
  if (s.mean.size() != s.scale.size()) throw ContractError("standardizer arrays differ in length");
  return s;
}

}  // namespace osmheight::ssl
