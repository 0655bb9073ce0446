// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/kernel_rbf.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "osmheight/errors.hpp"

namespace osmheight::ssl {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

KernelRegressor::KernelRegressor(Matrix support, std::vector<double> coef, double gamma,
                                 double offset)
    : support_(std::move(support)), coef_(std::move(coef)), gamma_(gamma), offset_(offset) {
  if (coef_.size() != support_.rows()) throw ContractError("kernel coefficients do not match support");
}

namespace {

double resolve_gamma(const KernelParams& p, std::size_t m) {
  if (p.gamma > 0.0) return p.gamma;
  if (p.gamma < 0.0) throw TrainingError("kernel gamma must be positive");
  return 1.0 / static_cast<double>(std::max<std::size_t>(1, m));
}

Matrix gram(const Matrix& Z, double gamma) {
  const std::size_t n = Z.rows();
  Matrix K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) K(i, j) = K(j, i) = rbf_kernel(Z.row(i), Z.row(j), gamma);
  }
  return K;
}

double mean_of(std::span<const double> y) {
  return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

}  // namespace

KernelRegressor KernelRegressor::fit_ridge(const Matrix& Z, std::span<const double> y,
                                           const KernelParams& p) {
  if (!(p.lambda > 0.0)) throw TrainingError("kernel ridge lambda must be positive");
  const double gamma = resolve_gamma(p, Z.cols());
  const double ybar = mean_of(y);
  Matrix A = gram(Z, gamma);
  for (std::size_t i = 0; i < A.rows(); ++i) A(i, i) += p.lambda;
  cholesky_decompose(A);
  std::vector<double> centred(y.begin(), y.end());
  for (double& v : centred) v -= ybar;
  return KernelRegressor(Z, cholesky_solve(A, centred), gamma, ybar);
}

KernelRegressor KernelRegressor::fit_svr(const Matrix& Z, std::span<const double> y,
                                         const KernelParams& p) {
  if (!(p.C > 0.0) || !(p.epsilon >= 0.0) || !(p.tolerance > 0.0)) {
    throw TrainingError("bad svr hyperparameters");
  }
  const double gamma = resolve_gamma(p, Z.cols());
  const double ybar = mean_of(y);
  const std::size_t n = Z.rows();
  const std::size_t l = 2 * n;
  const Matrix K = gram(Z, gamma);
  constexpr double kTau = 1e-12;

  // Variables t < n are alpha_t (sign +1), t >= n are alpha*_{t-n} (sign -1).
  std::vector<double> alpha(l, 0.0), G(l);
  std::vector<int> sign(l);
  for (std::size_t t = 0; t < l; ++t) {
    const bool upper = t < n;
    const double yt = y[upper ? t : t - n] - ybar;
    sign[t] = upper ? 1 : -1;
    G[t] = upper ? p.epsilon - yt : p.epsilon + yt;
  }
  auto idx = [n](std::size_t t) { return t < n ? t : t - n; };
  auto Q = [&](std::size_t s, std::size_t t) {
    return static_cast<double>(sign[s] * sign[t]) * K(idx(s), idx(t));
  };
  const double C = p.C;

  for (long iter = 0; iter < p.max_iterations; ++iter) {
    // Working set: i by the maximal violation, j by second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (sign[t] == 1 ? alpha[t] < C : alpha[t] > 0) {
        if (-sign[t] * G[t] >= gmax) {
          gmax = -sign[t] * G[t];
          i = t;
        }
      }
    }
    if (i == l) break;
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (sign[t] == 1 ? alpha[t] > 0 : alpha[t] < C) {
        const double yg = sign[t] * G[t];
        gmax2 = std::max(gmax2, yg);
        const double grad_diff = gmax + yg;
        if (grad_diff > 0) {
          double quad = 2.0 - 2.0 * K(idx(i), idx(t));
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      }
    }
    if (gmax + gmax2 < p.tolerance || j == l) break;

    const double old_i = alpha[i], old_j = alpha[j];
    const double qij = Q(i, j);
    if (sign[i] != sign[j]) {
      double quad = 2.0 + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < l; ++t) G[t] += Q(t, i) * di + Q(t, j) * dj;
  }

  // Bias from free variables, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yg = sign[t] * G[t];
    if (alpha[t] >= C) {
      if (sign[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (sign[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : 0.5 * (ub + lb);

  std::vector<std::size_t> sv;
  std::vector<double> coef;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = alpha[k] - alpha[k + n];
    if (c != 0.0) {
      sv.push_back(k);
      coef.push_back(c);
    }
  }
  return KernelRegressor(Z.select_rows(sv), std::move(coef), gamma, ybar - rho);
}

double KernelRegressor::predict(std::span<const double> z) const {
  double s = offset_;
  for (std::size_t i = 0; i < coef_.size(); ++i) s += coef_[i] * rbf_kernel(z, support_.row(i), gamma_);
  return s;
}

nlohmann::json KernelRegressor::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < support_.rows(); ++i) {
    const auto r = support_.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"gamma", gamma_}, {"offset", offset_}, {"coef", coef_},
          {"n_features", support_.cols()}, {"support", rows}};
}

KernelRegressor KernelRegressor::from_json(const nlohmann::json& j) {
  const auto m = j.at("n_features").get<std::size_t>();
  Matrix support(0, m);
  for (const auto& r : j.at("support")) support.append_row(r.get<std::vector<double>>());
  return KernelRegressor(std::move(support), j.at("coef").get<std::vector<double>>(),
                         j.at("gamma").get<double>(), j.at("offset").get<double>());
}

}  // namespace osmheight::ssl
