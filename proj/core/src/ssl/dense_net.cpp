// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "osmheight/errors.hpp"
#include "osmheight/random.hpp"

namespace osmheight::ssl {

DenseRegressor::DenseRegressor(std::vector<DenseLayer> layers, double y_mean, double y_scale)
    : layers_(std::move(layers)), y_mean_(y_mean), y_scale_(y_scale) {
  if (layers_.empty() || layers_.back().out != 1) throw ContractError("dense net must end in one output");
}

namespace {

// activations[0] = input; activations[k + 1] = output of layer k (ReLU on
// hidden layers).
void forward(const std::vector<DenseLayer>& layers, std::span<const double> z,
             std::vector<std::vector<double>>& act) {
  act.resize(layers.size() + 1);
  act[0].assign(z.begin(), z.end());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& L = layers[k];
    auto& o = act[k + 1];
    o.assign(L.out, 0.0);
    const bool hidden = k + 1 < layers.size();
    for (std::size_t r = 0; r < L.out; ++r) {
      const double* w = L.weights.data() + r * L.in;
      double s = L.bias[r];
      for (std::size_t c = 0; c < L.in; ++c) s += w[c] * act[k][c];
      o[r] = hidden ? std::max(0.0, s) : s;
    }
  }
}

}  // namespace

DenseRegressor DenseRegressor::fit(const Matrix& Z, std::span<const double> y, const DenseParams& p,
                                   std::uint64_t seed) {
  if (!(p.learning_rate > 0.0) || p.epochs < 0 || p.batch < 1 || !(p.momentum >= 0.0) ||
      p.momentum >= 1.0) {
    throw TrainingError("bad dense_net hyperparameters");
  }
  for (int w : p.layers) {
    if (w < 1) throw TrainingError("dense_net layer widths must be positive");
  }
  const std::size_t n = Z.rows();
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  double scale = std::sqrt(var / static_cast<double>(n));
  if (!(scale > 0.0)) scale = 1.0;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (y[i] - mean) / scale;

  Rng rng(seed);
  std::vector<DenseLayer> layers;
  std::size_t in = Z.cols();
  std::vector<std::size_t> widths(p.layers.begin(), p.layers.end());
  widths.push_back(1);
  for (std::size_t k = 0; k < widths.size(); ++k) {
    DenseLayer L{in, widths[k], std::vector<double>(widths[k] * in, 0.0),
                 std::vector<double>(widths[k], 0.0)};
    // He initialisation on hidden layers; the output layer starts at zero
    // so the untrained net predicts the target mean.
    if (k + 1 < widths.size()) {
      const double sd = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(1, in)));
      for (double& w : L.weights) w = rng.normal(0.0, sd);
    }
    layers.push_back(std::move(L));
    in = widths[k];
  }

  std::vector<DenseLayer> grad = layers, vel = layers;
  for (auto& L : vel) {
    std::fill(L.weights.begin(), L.weights.end(), 0.0);
    std::fill(L.bias.begin(), L.bias.end(), 0.0);
  }
  std::vector<std::vector<double>> act, delta(layers.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(p.batch)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(p.batch));
      for (auto& G : grad) {
        std::fill(G.weights.begin(), G.weights.end(), 0.0);
        std::fill(G.bias.begin(), G.bias.end(), 0.0);
      }
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        forward(layers, Z.row(i), act);
        // d(0.5 e^2)/d out = e.
        for (std::size_t k = layers.size(); k-- > 0;) {
          const auto& L = layers[k];
          auto& d = delta[k];
          if (k + 1 == layers.size()) {
            d.assign(1, act[k + 1][0] - t[i]);
          } else {
            const auto& N = layers[k + 1];
            const auto& dn = delta[k + 1];
            d.assign(L.out, 0.0);
            for (std::size_t r = 0; r < N.out; ++r) {
              const double* w = N.weights.data() + r * N.in;
              for (std::size_t c = 0; c < N.in; ++c) d[c] += w[c] * dn[r];
            }
            for (std::size_t c = 0; c < L.out; ++c) {
              if (act[k + 1][c] <= 0.0) d[c] = 0.0;
            }
          }
          auto& G = grad[k];
          for (std::size_t r = 0; r < L.out; ++r) {
            if (d[r] == 0.0) continue;
            G.bias[r] += d[r];
            double* g = G.weights.data() + r * L.in;
            for (std::size_t c = 0; c < L.in; ++c) g[c] += d[r] * act[k][c];
          }
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = 0; k < layers.size(); ++k) {
        auto& L = layers[k];
        auto& V = vel[k];
        const auto& G = grad[k];
        for (std::size_t q = 0; q < L.weights.size(); ++q) {
          V.weights[q] = p.momentum * V.weights[q] - p.learning_rate * G.weights[q] * inv;
          L.weights[q] += V.weights[q];
        }
        for (std::size_t q = 0; q < L.bias.size(); ++q) {
          V.bias[q] = p.momentum * V.bias[q] - p.learning_rate * G.bias[q] * inv;
          L.bias[q] += V.bias[q];
        }
      }
    }
  }
  return DenseRegressor(std::move(layers), mean, scale);
}

double DenseRegressor::predict(std::span<const double> z) const {
  std::vector<std::vector<double>> act;
  forward(layers_, z, act);
  const double out = y_mean_ + y_scale_ * act.back()[0];
  return std::isfinite(out) ? out : y_mean_;
}

nlohmann::json DenseRegressor::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& L : layers_) {
    layers.push_back({{"in", L.in}, {"out", L.out}, {"weights", L.weights}, {"bias", L.bias}});
  }
  return {{"y_mean", y_mean_}, {"y_scale", y_scale_}, {"layers", layers}};
}

DenseRegressor DenseRegressor::from_json(const nlohmann::json& j) {
  std::vector<DenseLayer> layers;
  for (const auto& l : j.at("layers")) {
    DenseLayer L{l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                 l.at("weights").get<std::vector<double>>(), l.at("bias").get<std::vector<double>>()};
    if (L.weights.size() != L.in * L.out || L.bias.size() != L.out) {
      throw InputError("dense layer shape does not match its weights");
    }
    layers.push_back(std::move(L));
  }
  return DenseRegressor(std::move(layers), j.at("y_mean").get<double>(), j.at("y_scale").get<double>());
}

}  // namespace osmheight::ssl
