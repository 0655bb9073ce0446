// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/morphometry/centrality.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace osmheight::morphometry {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tie_eps(double d) { return kPathTieTolerance * std::max(1.0, d); }

}  // namespace

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double w) {
  if (u == v) return;
  const std::size_t n = std::max(u, v) + 1;
  if (adjacency.size() < n) adjacency.resize(n);
  for (auto& [to, weight] : adjacency[u]) {
    if (to == v) {
      weight = std::min(weight, w);
      for (auto& [back, bw] : adjacency[v]) {
        if (back == u) bw = weight;
      }
      return;
    }
  }
  adjacency[u].emplace_back(v, w);
  adjacency[v].emplace_back(u, w);
}

WeightedGraph WeightedGraph::from_streets(const geodata::StreetGraph& g) {
  WeightedGraph out;
  out.adjacency.resize(g.nodes.size());
  for (const auto& e : g.edges) out.add_edge(e.u, e.v, e.length);
  return out;
}

std::vector<double> betweenness(const WeightedGraph& g, bool normalized) {
  const std::size_t n = g.size();
  std::vector<double> cb(n, 0.0);
  std::vector<double> dist(n), sigma(n), delta(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> order;
  using Entry = std::pair<double, std::size_t>;

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();
    std::vector<char> settled(n, 0);

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[s] = 0.0;
    sigma[s] = 1.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (settled[v] || d > dist[v]) continue;
      settled[v] = 1;
      order.push_back(v);
      for (const auto& [w, len] : g.adjacency[v]) {
        const double alt = dist[v] + len;
        if (alt < dist[w] - tie_eps(dist[w] == kInf ? alt : dist[w])) {
          dist[w] = alt;
          sigma[w] = sigma[v];
          preds[w].assign(1, v);
          heap.emplace(alt, w);
        } else if (!settled[w] && std::abs(alt - dist[w]) <= tie_eps(dist[w])) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }

  // Every unordered pair was visited from both ends.
  for (auto& c : cb) c *= 0.5;
  if (normalized) {
    const double scale = n > 2 ? 2.0 / (double(n - 1) * double(n - 2)) : 0.0;
    for (auto& c : cb) c *= scale;
  }
  return cb;
}

double local_closeness(const WeightedGraph& g, std::size_t node, double radius) {
  const std::size_t n = g.size();
  std::vector<double> dist(n, kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[node] = 0.0;
  heap.emplace(0.0, node);
  double sum = 0.0;
  std::size_t reached = 0;
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (v != node) {
      sum += d;
      ++reached;
    }
    for (const auto& [w, len] : g.adjacency[v]) {
      const double alt = d + len;
      if (alt <= radius && alt < dist[w]) {
        dist[w] = alt;
        heap.emplace(alt, w);
      }
    }
  }
  return (reached == 0 || sum <= 0.0) ? 0.0 : static_cast<double>(reached) / sum;
}

std::vector<double> local_closeness_all(const WeightedGraph& g, double radius) {
  std::vector<double> out(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) out[v] = local_closeness(g, v, radius);
  return out;
}

}  // namespace osmheight::morphometry
