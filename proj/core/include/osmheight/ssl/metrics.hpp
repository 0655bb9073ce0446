// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace osmheight::ssl {

struct Metrics {
  double mae = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
};

/// Throws EvaluationError on a length mismatch, fewer than two values or a
/// constant truth vector.
Metrics evaluate(std::span<const double> pred, std::span<const double> truth);

}  // namespace osmheight::ssl
