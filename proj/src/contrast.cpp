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
#include "tgcc/contrast.hpp"

#include <cmath>

#include "tgcc/graph.hpp"

namespace tgcc {

namespace {

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return u.dot(v) / (nu * nv);
}

// d cos(u, v) / du; zero when either norm vanishes.
Eigen::VectorXd d_cosine_du(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return Eigen::VectorXd::Zero(u.size());
  double c = u.dot(v) / (nu * nv);
  return v / (nu * nv) - c * u / (nu * nu);
}

}  // namespace

NegativeSample build_negative_from(const SpectralDecomposition& dec,
                                   const Eigen::VectorXd& degrees, double kappa) {
  if (kappa < 0.0 || kappa > 1.0) throw ArgumentError("build_negative: kappa must be in [0, 1]");
  const int n = static_cast<int>(dec.eigenvalues.size());

  NegativeSample neg;
  neg.kappa = kappa;
  neg.kept_index_start = static_cast<int>(std::floor((1.0 - kappa) * n / 2.0));

  const int kept = n - neg.kept_index_start;
  const auto u_kept = dec.eigenvectors.rightCols(kept);
  const auto lam_kept = dec.eigenvalues.tail(kept);
  neg.laplacian_hat = u_kept * lam_kept.asDiagonal() * u_kept.transpose();

  Eigen::VectorXd dsqrt = degrees.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd inner = -neg.laplacian_hat;
  inner.diagonal().array() += 1.0;
  Eigen::MatrixXd adj = dsqrt.asDiagonal() * inner * dsqrt.asDiagonal();
  adj = adj.cwiseMax(0.0);
  adj.diagonal().setZero();
  neg.adjacency_neg = 0.5 * (adj + adj.transpose()).eval();
  return neg;
}

NegativeSample build_negative(const Eigen::MatrixXd& v_adjacency, double kappa, int cap) {
  Eigen::MatrixXd lap = normalized_laplacian(v_adjacency);
  SpectralDecomposition dec = spectral_decompose(lap, cap);
  return build_negative_from(dec, v_adjacency.rowwise().sum(), kappa);
}

Eigen::VectorXd readout(const Eigen::MatrixXd& z) {
  if (z.rows() < 1) throw ArgumentError("readout: empty matrix");
  return z.colwise().mean();
}

double infonce(const Eigen::VectorXd& pos_i, const Eigen::VectorXd& pos_j,
               const std::vector<Eigen::VectorXd>& negatives, double t) {
  return infonce_grad(pos_i, pos_j, negatives, t).loss;
}

InfoNceGrad infonce_grad(const Eigen::VectorXd& pos_i, const Eigen::VectorXd& pos_j,
                         const std::vector<Eigen::VectorXd>& negatives, double t) {
  if (t <= 0.0) throw ArgumentError("infonce: temperature must be > 0");
  if (negatives.empty()) throw ArgumentError("infonce: need at least one negative");
  const auto dim = pos_i.size();
  if (pos_j.size() != dim) throw StructuralError("infonce: vector length mismatch");
  for (const auto& neg : negatives)
    if (neg.size() != dim) throw StructuralError("infonce: vector length mismatch");

  const int m = static_cast<int>(negatives.size());
  double p = cosine(pos_i, pos_j) / t;
  Eigen::VectorXd q(m);
  for (int k = 0; k < m; ++k) q[k] = cosine(pos_i, negatives[k]) / t;

  double mx = std::max(p, q.maxCoeff());
  double ep = std::exp(p - mx);
  Eigen::VectorXd eq = (q.array() - mx).exp();
  double denom = ep + eq.sum();

  InfoNceGrad out;
  out.loss = -(p - mx) + std::log(denom);

  // dL/dp = softmax(p) - 1, dL/dq_k = softmax(q_k).
  double dp = ep / denom - 1.0;
  out.d_pos_i = dp / t * d_cosine_du(pos_i, pos_j);
  out.d_pos_j = dp / t * d_cosine_du(pos_j, pos_i);
  out.d_negatives.resize(m);
  for (int k = 0; k < m; ++k) {
    double dq = eq[k] / denom;
    out.d_pos_i += dq / t * d_cosine_du(pos_i, negatives[k]);
    out.d_negatives[k] = dq / t * d_cosine_du(negatives[k], pos_i);
  }
  return out;
}

}  // namespace tgcc
