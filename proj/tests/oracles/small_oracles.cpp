// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "small_oracles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace osmheight::oracle {

double exhaustive_two_partition_wcss(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2 || n > 20) throw std::invalid_argument("need 2..20 values");
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
    double s[2] = {0, 0}, ss[2] = {0, 0};
    double c[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      s[g] += v[i];
      ss[g] += v[i] * v[i];
      c[g] += 1;
    }
    double w = 0;
    for (int g = 0; g < 2; ++g) w += ss[g] - s[g] * s[g] / c[g];
    best = std::min(best, w);
  }
  return best;
}

std::vector<double> ols(std::span<const double> X, std::size_t n, std::size_t m,
                        std::span<const double> y) {
  Eigen::MatrixXd A(n, m + 1);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    for (std::size_t j = 0; j < m; ++j) A(i, j + 1) = X[i * m + j];
    b(i) = y[i];
  }
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(b);
  return {beta.data(), beta.data() + beta.size()};
}

double mesh_volume(std::span<const lod1::Point3> p,
                   std::span<const std::array<std::size_t, 3>> triangles) {
  double v = 0;
  for (const auto& t : triangles) {
    const auto& a = p[t[0]];
    const auto& b = p[t[1]];
    const auto& c = p[t[2]];
    v += a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) +
         a.z * (b.x * c.y - b.y * c.x);
  }
  return v / 6.0;
}

bool edge_manifold(std::span<const std::array<std::size_t, 3>> triangles) {
  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [e, count] : directed) {
    if (count != 1) return false;
    auto back = directed.find({e.second, e.first});
    if (back == directed.end() || back->second != 1) return false;
  }
  return true;
}

long euler_characteristic(std::size_t vertex_count,
                          const std::vector<std::vector<std::size_t>>& faces) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& f : faces) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const auto a = f[k], b = f[(k + 1) % f.size()];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return static_cast<long>(vertex_count) - static_cast<long>(edges.size()) +
         static_cast<long>(faces.size());
}

}  // namespace osmheight::oracle
