// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "osmheight/random.hpp"
#include "osmheight/ssl/model.hpp"

namespace osmheight::ssl {

struct TreeNode {
  std::int32_t feature = -1;  // -1 = leaf
  double threshold = 0.0;     // go left when z[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean target of the node's samples
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double predict(std::span<const double> z) const;
};

/// CART regression tree on the given sample rows (repeats allowed). Each
/// split maximises the reduction of squared error over a per-node feature
/// subsample; thresholds sit midway between adjacent distinct values and
/// ties keep the first candidate examined.
RegressionTree fit_tree(const Matrix& Z, std::span<const double> y,
                        std::span<const std::size_t> sample, const ForestParams& p, Rng& rng);

class ForestRegressor : public Regressor {
 public:
  explicit ForestRegressor(std::vector<RegressionTree> trees) : trees_(std::move(trees)) {}

  /// Tree t draws from Rng::derive(seed, t), so the result does not depend
  /// on thread scheduling.
  static ForestRegressor fit(const Matrix& Z, std::span<const double> y, const ForestParams& p,
                             std::uint64_t seed);

  double predict(std::span<const double> z) const override;
  nlohmann::json to_json() const override;  // summary only; see write/read
  const std::vector<RegressionTree>& trees() const { return trees_; }

  void write(std::ostream& out) const;
  static ForestRegressor read(std::istream& in);

 private:
  std::vector<RegressionTree> trees_;
};

}  // namespace osmheight::ssl
