// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/random_forest.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "osmheight/errors.hpp"
#include "osmheight/parallel.hpp"

namespace osmheight::ssl {

double RegressionTree::predict(std::span<const double> z) const {
  std::size_t k = 0;
  while (nodes[k].feature >= 0) {
    const auto& n = nodes[k];
    k = static_cast<std::size_t>(z[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                        : n.right);
  }
  return nodes[k].value;
}

namespace {

struct Pending {
  std::size_t node;
  std::vector<std::size_t> rows;
  int depth;
};

struct BestSplit {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

}  // namespace

RegressionTree fit_tree(const Matrix& Z, std::span<const double> y,
                        std::span<const std::size_t> sample, const ForestParams& p, Rng& rng) {
  const std::size_t m = Z.cols();
  const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, p.min_leaf));
  const std::size_t mtry =
      p.max_features > 0 ? std::min<std::size_t>(static_cast<std::size_t>(p.max_features), m)
                         : std::max<std::size_t>(1, m / 3);

  RegressionTree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, std::vector<std::size_t>(sample.begin(), sample.end()), 0});
  std::vector<std::size_t> features(m);
  std::vector<std::size_t> order;

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    const std::size_t n = cur.rows.size();
    double sum = 0.0;
    bool constant = true;
    for (std::size_t r : cur.rows) {
      sum += y[r];
      constant = constant && y[r] == y[cur.rows.front()];
    }
    tree.nodes[cur.node].value = sum / static_cast<double>(n);
    if (constant || n < 2 * min_leaf || (p.max_depth > 0 && cur.depth >= p.max_depth)) continue;

    std::iota(features.begin(), features.end(), 0);
    if (mtry < m) {
      for (std::size_t i = 0; i < mtry; ++i) std::swap(features[i], features[i + rng.index(m - i)]);
    }

    const double parent_score = sum * sum / static_cast<double>(n);
    BestSplit best;
    best.score = parent_score;
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const std::size_t f = features[fi];
      order = cur.rows;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return Z(a, f) < Z(b, f); });
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += y[order[i]];
        const std::size_t nl = i + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double a = Z(order[i], f), b = Z(order[i + 1], f);
        if (!(a < b)) continue;
        const double right_sum = sum - left_sum;
        const double score = left_sum * left_sum / static_cast<double>(nl) +
                             right_sum * right_sum / static_cast<double>(nr);
        if (score > best.score) {
          double t = 0.5 * (a + b);
          if (!(t < b)) t = a;
          best = {static_cast<int>(f), t, score};
        }
      }
    }
    // Require a reduction beyond rounding noise of the parent score.
    if (best.feature < 0 || best.score - parent_score <= 1e-12 * std::abs(parent_score)) continue;

    std::vector<std::size_t> left, right;
    for (std::size_t r : cur.rows) {
      (Z(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    }
    const std::size_t li = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[cur.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = static_cast<std::int32_t>(li);
    node.right = static_cast<std::int32_t>(li + 1);
    stack.push_back({li + 1, std::move(right), cur.depth + 1});
    stack.push_back({li, std::move(left), cur.depth + 1});
  }
  return tree;
}

ForestRegressor ForestRegressor::fit(const Matrix& Z, std::span<const double> y,
                                     const ForestParams& p, std::uint64_t seed) {
  if (p.n_trees < 1) throw TrainingError("random_forest needs at least one tree");
  const std::size_t n = Z.rows();
  std::vector<RegressionTree> trees(static_cast<std::size_t>(p.n_trees));
  parallel_for(
      trees.size(),
      [&](std::size_t t) {
        Rng rng = Rng::derive(seed, t);
        std::vector<std::size_t> sample(n);
        if (p.bootstrap) {
          for (auto& s : sample) s = rng.index(n);
        } else {
          std::iota(sample.begin(), sample.end(), 0);
        }
        trees[t] = fit_tree(Z, y, sample, p, rng);
      },
      p.threads);
  return ForestRegressor(std::move(trees));
}

double ForestRegressor::predict(std::span<const double> z) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.predict(z);
  return s / static_cast<double>(trees_.size());
}

nlohmann::json ForestRegressor::to_json() const {
  std::size_t nodes = 0;
  for (const auto& t : trees_) nodes += t.nodes.size();
  return {{"n_trees", trees_.size()}, {"n_nodes", nodes}};
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("truncated forest dump");
  return v;
}

}  // namespace

void ForestRegressor::write(std::ostream& out) const {
  put<std::uint64_t>(out, trees_.size());
  for (const auto& t : trees_) {
    put<std::uint64_t>(out, t.nodes.size());
    for (const auto& n : t.nodes) {
      put(out, n.feature);
      put(out, n.threshold);
      put(out, n.left);
      put(out, n.right);
      put(out, n.value);
    }
  }
}

ForestRegressor ForestRegressor::read(std::istream& in) {
  const auto n_trees = get<std::uint64_t>(in);
  std::vector<RegressionTree> trees(n_trees);
  for (auto& t : trees) {
    const auto n_nodes = get<std::uint64_t>(in);
    t.nodes.resize(n_nodes);
    for (std::uint64_t k = 0; k < n_nodes; ++k) {
      auto& n = t.nodes[k];
      n.feature = get<std::int32_t>(in);
      n.threshold = get<double>(in);
      n.left = get<std::int32_t>(in);
      n.right = get<std::int32_t>(in);
      n.value = get<double>(in);
      // Children always follow their parent, which rules out cycles.
      const auto bad = [&](std::int32_t c) {
        return c < 0 || static_cast<std::uint64_t>(c) <= k || static_cast<std::uint64_t>(c) >= n_nodes;
      };
      if (n.feature >= 0 && (bad(n.left) || bad(n.right))) throw InputError("corrupt forest dump");
    }
    if (t.nodes.empty()) throw InputError("corrupt forest dump: empty tree");
  }
  if (trees.empty()) throw InputError("corrupt forest dump: no trees");
  return ForestRegressor(std::move(trees));
}

}  // namespace osmheight::ssl
