// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/linear_gd.hpp"

#include <cmath>
#include <numeric>

#include "osmheight/errors.hpp"

namespace osmheight::ssl {

namespace {

double loss_of(const Matrix& Z, std::span<const double> y, std::span<const double> w, double b,
               Loss loss, std::vector<double>& residual) {
  const std::size_t n = Z.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = Z.row(i);
    const double r = b + std::inner_product(z.begin(), z.end(), w.begin(), 0.0) - y[i];
    residual[i] = r;
    total += loss == Loss::mse ? r * r : std::abs(r);
  }
  return total / static_cast<double>(n);
}

}  // namespace

LinearRegressor::LinearRegressor(std::vector<double> weights, double bias,
                                 std::vector<double> loss_trace)
    : weights_(std::move(weights)), bias_(bias), loss_trace_(std::move(loss_trace)) {}

LinearRegressor LinearRegressor::fit(const Matrix& Z, std::span<const double> y,
                                     const LinearParams& p) {
  if (!(p.learning_rate > 0.0) || p.epochs < 0) throw TrainingError("bad linear_gd hyperparameters");
  const std::size_t n = Z.rows(), m = Z.cols();
  std::vector<double> w(m, 0.0), w_next(m), grad(m), residual(n), residual_next(n);
  double b = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double lr = p.learning_rate;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(p.epochs) + 1);
  double loss = loss_of(Z, y, w, b, p.loss, residual);
  trace.push_back(loss);

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = p.loss == Loss::mse ? 2.0 * residual[i]
                                           : static_cast<double>((residual[i] > 0) - (residual[i] < 0));
      grad_b += g;
      const auto z = Z.row(i);
      for (std::size_t j = 0; j < m; ++j) grad[j] += g * z[j];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    grad_b *= inv_n;
    for (double& g : grad) g *= inv_n;

    // Halve until the step does not increase the loss.
    double next_loss = loss;
    double b_next = b;
    while (lr > 1e-300) {
      for (std::size_t j = 0; j < m; ++j) w_next[j] = w[j] - lr * grad[j];
      b_next = b - lr * grad_b;
      next_loss = loss_of(Z, y, w_next, b_next, p.loss, residual_next);
      if (next_loss <= loss) break;
      lr *= 0.5;
    }
    if (next_loss <= loss) {
      w.swap(w_next);
      b = b_next;
      residual.swap(residual_next);
      loss = next_loss;
    }
    trace.push_back(loss);
  }
  return LinearRegressor(std::move(w), b, std::move(trace));
}

double LinearRegressor::predict(std::span<const double> z) const {
  return bias_ + std::inner_product(z.begin(), z.end(), weights_.begin(), 0.0);
}

nlohmann::json LinearRegressor::to_json() const {
  return {{"weights", weights_}, {"bias", bias_}};
}

LinearRegressor LinearRegressor::from_json(const nlohmann::json& j) {
  return LinearRegressor(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
}

std::pair<std::vector<double>, double> linear_coefficients(const TrainedModel& model) {
  const auto* lin = dynamic_cast<const LinearRegressor*>(&model.regressor());
  if (!lin) throw ContractError("model is not linear_gd");
  const auto& st = model.standardizer();
  std::vector<double> coef(lin->weights().size(), 0.0);
  double intercept = lin->bias();
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (st.scale[j] > 0.0) {
      coef[j] = lin->weights()[j] / st.scale[j];
      intercept -= coef[j] * st.mean[j];
    }
  }
  return {coef, intercept};
}

}  // namespace osmheight::ssl
