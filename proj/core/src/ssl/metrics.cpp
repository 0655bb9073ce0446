// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/metrics.hpp"

#include <cmath>
#include <string>

#include "osmheight/errors.hpp"

namespace osmheight::ssl {

Metrics evaluate(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw EvaluationError("prediction and truth lengths differ (" + std::to_string(pred.size()) +
                          " vs " + std::to_string(truth.size()) + ")");
  }
  const std::size_t n = truth.size();
  if (n < 2) throw EvaluationError("need at least two values to evaluate");
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= static_cast<double>(n);
  double abs_sum = 0.0, sq_sum = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = pred[i] - truth[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) throw EvaluationError("truth values are all identical; R^2 is undefined");
  Metrics m;
  m.mae = abs_sum / static_cast<double>(n);
  m.rmse = std::sqrt(sq_sum / static_cast<double>(n));
  m.r2 = 1.0 - sq_sum / ss_tot;
  return m;
}

}  // namespace osmheight::ssl
