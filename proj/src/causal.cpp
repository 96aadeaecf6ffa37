/*
 * Copyright 2026 The TGCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "tgcc/causal.hpp"

#include <cmath>

namespace tgcc {

namespace {

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool degenerate(double norm, const Eigen::VectorXd& col) {
  return norm <= 1e-12 * std::max(1.0, col.cwiseAbs().maxCoeff());
}

}  // namespace

NormalizedDims normalize_dims(const Eigen::MatrixXd& z) {
  const int n = static_cast<int>(z.rows());
  const int h = static_cast<int>(z.cols());
  if (n < 2) throw ArgumentError("normalize_dims: need at least 2 rows");

  NormalizedDims out;
  out.zbar.resize(n, h);
  out.std.resize(h);
  for (int j = 0; j < h; ++j) {
    Eigen::VectorXd centered = z.col(j).array() - z.col(j).mean();
    double norm = centered.norm();
    if (degenerate(norm, z.col(j))) {
      out.zbar.col(j).setZero();
      out.std[j] = 0.0;
    } else {
      out.zbar.col(j) = centered / norm;
      out.std[j] = norm / std::sqrt(static_cast<double>(n));
    }
  }
  return out;
}

double covariance_offdiag_sq(const Eigen::MatrixXd& zbar) {
  const int n = static_cast<int>(zbar.rows());
  if (n < 2) throw ArgumentError("covariance_offdiag_sq: need at least 2 rows");
  Eigen::MatrixXd centered = zbar.rowwise() - zbar.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  return cov.squaredNorm() - cov.diagonal().squaredNorm();
}

double hsic_linear(const Eigen::VectorXd& zi, const Eigen::VectorXd& zj) {
  const int n = static_cast<int>(zi.size());
  if (n < 2) throw ArgumentError("hsic_linear: need at least 2 samples");
  if (zj.size() != n) throw StructuralError("hsic_linear: length mismatch");
  Eigen::MatrixXd ki = zi * zi.transpose();
  Eigen::MatrixXd kj = zj * zj.transpose();
  Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd bi = ki * centering;
  Eigen::MatrixXd bj = kj * centering;
  double trace = bi.cwiseProduct(bj.transpose()).sum();
  return trace / (static_cast<double>(n - 1) * static_cast<double>(n - 1));
}

EmbeddingPair make_embedding_pair(Eigen::MatrixXd za, Eigen::MatrixXd zv) {
  if (za.rows() != zv.rows() || za.cols() != zv.cols())
    throw StructuralError("make_embedding_pair: view shapes differ");
  EmbeddingPair pair;
  pair.norm_a = normalize_dims(za);
  pair.norm_v = normalize_dims(zv);
  pair.za = std::move(za);
  pair.zv = std::move(zv);
  return pair;
}

CausalLossTerms causal_loss(const EmbeddingPair& pair, double alpha, double beta, double gamma,
                            double lambda_target) {
  if (pair.za.cols() != pair.zv.cols() || pair.za.rows() != pair.zv.rows())
    throw StructuralError("causal_loss: view shapes differ");

  CausalLossTerms t;
  t.alpha = alpha;
  t.beta = beta;
  t.gamma = gamma;
  t.lambda_target = lambda_target;
  const int h = static_cast<int>(pair.za.cols());
  for (int j = 0; j < h; ++j) {
    t.alignment += pair.norm_a.zbar.col(j).dot(pair.norm_v.zbar.col(j));
    t.std_penalty += std::abs(pair.norm_a.std[j] - lambda_target) +
                     std::abs(pair.norm_v.std[j] - lambda_target);
  }
  t.independence = covariance_offdiag_sq(pair.norm_a.zbar) + covariance_offdiag_sq(pair.norm_v.zbar);
  t.total = -alpha * t.alignment + beta * t.std_penalty + gamma * t.independence;
  return t;
}

namespace {

// Gradient of the total with respect to one raw view. `mine` is this view's
// normalization, `other` the opposite view's. The chain for column j is
// z -> centered c -> zbar = c/|c|, with d(zbar)/dc = (I - zbar zbarᵀ)/|c|.
Eigen::MatrixXd view_grad(const Eigen::MatrixXd& raw, const NormalizedDims& mine,
                          const NormalizedDims& other, double alpha, double beta, double gamma,
                          double lambda_target) {
  const int n = static_cast<int>(raw.rows());
  const int h = static_cast<int>(raw.cols());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd gram = mine.zbar.transpose() * mine.zbar;  // h x h
  const double indep_coef = 4.0 * gamma / (static_cast<double>(n - 1) * static_cast<double>(n - 1));
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  for (int j = 0; j < h; ++j) {
    Eigen::VectorXd centered = raw.col(j).array() - raw.col(j).mean();
    double norm = centered.norm();
    if (degenerate(norm, raw.col(j))) continue;  // subgradient 0 at the degenerate point
    Eigen::VectorXd zbar = mine.zbar.col(j);

    Eigen::VectorXd d_zbar = -alpha * other.zbar.col(j);
    d_zbar += indep_coef * (mine.zbar * gram.col(j) - gram(j, j) * zbar);

    Eigen::VectorXd col = (d_zbar - zbar.dot(d_zbar) * zbar) / norm;
    col += beta * sign0(mine.std[j] - lambda_target) / sqrt_n * zbar;
    col.array() -= col.mean();  // centering adjoint
    grad.col(j) = col;
  }
  return grad;
}

}  // namespace

CausalLossGrad causal_loss_grad(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zv, double alpha,
                                double beta, double gamma, double lambda_target) {
  EmbeddingPair pair = make_embedding_pair(za, zv);
  CausalLossGrad out;
  out.terms = causal_loss(pair, alpha, beta, gamma, lambda_target);
  out.d_za = view_grad(pair.za, pair.norm_a, pair.norm_v, alpha, beta, gamma, lambda_target);
  out.d_zv = view_grad(pair.zv, pair.norm_v, pair.norm_a, alpha, beta, gamma, lambda_target);
  return out;
}

}  // namespace tgcc
