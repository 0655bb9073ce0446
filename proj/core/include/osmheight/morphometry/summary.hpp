// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

namespace osmheight::morphometry {

/// Total / mean / population standard deviation of a sample. The empty
/// sample summarises to all zeros so feature matrices stay finite.
struct Summary {
  double total = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace osmheight::morphometry
