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
#include "tgcc/intervention.hpp"

#include <cmath>
#include <limits>

#include "tgcc/graph.hpp"

namespace tgcc {

namespace {

constexpr int kMaxLinearizations = 16;

// Alternating row/column scaling of `kernel` toward marginals (a, b).
// Returns diag(u) kernel diag(v). Entries of a or b equal to zero yield a
// zero row/column (0/0 treated as 0). Throws NumericError on divergence.
Eigen::MatrixXd sinkhorn_scale(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, int iters, double tol) {
  const int n = static_cast<int>(kernel.rows());
  for (int i = 0; i < n; ++i) {
    if (a[i] > 0.0 && kernel.row(i).sum() <= 0.0)
      throw NumericError(
          "sinkhorn: kernel row collapsed to zero (reward spread too large); increase eps");
    if (b[i] > 0.0 && kernel.col(i).sum() <= 0.0)
      throw NumericError(
          "sinkhorn: kernel column collapsed to zero (reward spread too large); increase eps");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd kv = kernel * v;
    for (int i = 0; i < n; ++i) u[i] = kv[i] > 0.0 ? a[i] / kv[i] : 0.0;
    Eigen::VectorXd ku = kernel.transpose() * u;
    for (int i = 0; i < n; ++i) v[i] = ku[i] > 0.0 ? b[i] / ku[i] : 0.0;
    if (!u.allFinite() || !v.allFinite())
      throw NumericError("sinkhorn: scaling vectors diverged; increase eps");

    Eigen::VectorXd row_sums = u.asDiagonal() * (kernel * v);
    double err = (row_sums - a).cwiseAbs().maxCoeff();
    if (err < tol) break;
  }
  Eigen::MatrixXd plan = u.asDiagonal() * kernel * v.asDiagonal();
  if (!plan.allFinite()) throw NumericError("sinkhorn: plan diverged; increase eps");
  return plan;
}

// Stabilized kernel exp((reward - max)/eps) restricted to `mask`.
Eigen::MatrixXd reward_kernel(const Eigen::MatrixXd& reward, double eps,
                              const Eigen::ArrayXXd& mask) {
  Eigen::ArrayXXd shifted = reward.array();
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < reward.cols(); ++j)
    for (int i = 0; i < reward.rows(); ++i)
      if (mask(i, j) != 0.0) mx = std::max(mx, shifted(i, j));
  if (!std::isfinite(mx)) mx = 0.0;
  Eigen::MatrixXd kernel = ((shifted - mx) / eps).exp().matrix();
  return kernel.cwiseProduct(mask.matrix());
}

double inner(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  return p.cwiseProduct(q).sum();
}

Eigen::MatrixXd solve_masked(const Eigen::MatrixXd& match, double reward_sign, double eps,
                             const Eigen::VectorXd& a, const Eigen::VectorXd& b, int iters,
                             double tol, const Eigen::ArrayXXd& mask) {
  // Feasible start: independent coupling restricted to the mask.
  Eigen::MatrixXd plan = (a * b.transpose()).cwiseProduct(mask.matrix());
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  for (int round = 0; round < kMaxLinearizations; ++round) {
    double sigma = inner(match, plan);
    // Linearized matching reward at the current iterate, sign-flipped for
    // the deletion plan.
    Eigen::MatrixXd reward = (reward_sign * 2.0 * sigma) * match;
    plan = sinkhorn_scale(reward_kernel(reward, eps, mask), a, b, iters, tol);
    double matched = inner(match, plan);
    double obj = reward_sign * matched * matched + eps * plan_entropy(plan);
    if (std::isfinite(prev_obj) && std::abs(obj - prev_obj) < tol) break;
    prev_obj = obj;
  }
  return plan;
}

}  // namespace

double plan_entropy(const Eigen::MatrixXd& plan) {
  double h = 0.0;
  for (int j = 0; j < plan.cols(); ++j)
    for (int i = 0; i < plan.rows(); ++i) {
      double p = plan(i, j);
      if (p > 0.0) h -= p * (std::log(p) - 1.0);
    }
  return h;
}

Eigen::MatrixXd solve_delta_plus(const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& laplacian,
                                 const Eigen::MatrixXd& theta, double eps, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b, int iters, double tol) {
  if (eps <= 0.0) throw ArgumentError("solve_delta_plus: eps must be > 0");
  const int n = static_cast<int>(adjacency.rows());
  if (laplacian.rows() != n || theta.rows() != n || a.size() != n || b.size() != n)
    throw StructuralError("solve_delta_plus: shape mismatch");
  if (a.minCoeff() < 0.0 || b.minCoeff() < 0.0 || std::abs(a.sum() - 1.0) > 1e-6 ||
      std::abs(b.sum() - 1.0) > 1e-6)
    throw ArgumentError("solve_delta_plus: a and b must be probability vectors");

  Eigen::ArrayXXd mask = Eigen::ArrayXXd::Ones(n, n);
  mask.matrix().diagonal().setZero();
  Eigen::MatrixXd match = theta * laplacian;
  return solve_masked(match, +1.0, eps, a, b, iters, tol, mask);
}

Eigen::MatrixXd solve_delta_minus(const Eigen::MatrixXd& adjacency,
                                  const Eigen::MatrixXd& laplacian, const Eigen::MatrixXd& theta,
                                  double eps, int iters) {
  if (eps <= 0.0) throw ArgumentError("solve_delta_minus: eps must be > 0");
  const int n = static_cast<int>(adjacency.rows());
  if (laplacian.rows() != n || theta.rows() != n)
    throw StructuralError("solve_delta_minus: shape mismatch");

  Eigen::ArrayXXd mask = (adjacency.array() > 0.0).cast<double>();
  mask.matrix().diagonal().setZero();
  if (mask.sum() == 0.0) return Eigen::MatrixXd::Zero(n, n);

  // Degree distribution restricted to the support; the adjacency scaled to
  // unit mass is itself feasible, so the masked problem always has a
  // solution.
  Eigen::VectorXd deg = adjacency.rowwise().sum();
  Eigen::VectorXd marg = deg / deg.sum();

  Eigen::MatrixXd match = theta * laplacian;
  Eigen::MatrixXd plan = solve_masked(match, -1.0, eps, marg, marg, iters, 1e-9, mask);
  return plan.cwiseMin(adjacency);
}

Eigen::MatrixXd intervene(const Eigen::MatrixXd& adjacency, const InterventionPlan& plan,
                          double scale) {
  if (scale <= 0.0) throw ArgumentError("intervene: scale must be > 0");
  Eigen::MatrixXd v =
      adjacency + scale * plan.delta_plus - scale * plan.delta_minus;
  v = v.cwiseMax(0.0).cwiseMin(1.0);
  v = 0.5 * (v + v.transpose()).eval();
  v.diagonal().setZero();
  return v;
}

Eigen::MatrixXd theta_objective_grad(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& laplacian,
                                     const Eigen::MatrixXd& delta) {
  double sigma = (theta * laplacian).cwiseProduct(delta).sum();
  return 2.0 * sigma * (delta * laplacian.transpose());
}

Eigen::MatrixXd update_theta(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& grad_signal,
                             double lr) {
  if (theta.rows() != grad_signal.rows() || theta.cols() != grad_signal.cols())
    throw StructuralError("update_theta: shape mismatch");
  Eigen::MatrixXd next = theta + lr * grad_signal;
  return next.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace tgcc
