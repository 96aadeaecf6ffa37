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
#pragma once

#include <Eigen/Dense>

#include "tgcc/errors.hpp"

namespace tgcc {

/// Edge-edit plans produced by the entropy-regularized solvers. delta_plus
/// is a transport plan with row sums a and column sums b; delta_minus lives
/// on the support of the existing adjacency only.
struct InterventionPlan {
  Eigen::MatrixXd delta_plus;
  Eigen::MatrixXd delta_minus;
  Eigen::MatrixXd theta;
  double epsilon = 1.0;
  int iters = 500;
  double tol = 1e-6;
};

/// Maximizes <Theta L, D>^2 + eps*H(D) subject to D 1 = a, Dᵀ 1 = b, D >= 0
/// and zero diagonal. The squared matching term is linearized at the current
/// iterate and each linearization is solved by Sinkhorn scaling of
/// exp(reward/eps); the loop stops when the true objective moves by less
/// than `tol` or the iteration budget runs out.
/// Throws NumericError (suggesting a larger eps) if the scaling diverges.
Eigen::MatrixXd solve_delta_plus(const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& laplacian,
                                 const Eigen::MatrixXd& theta, double eps, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b, int iters, double tol);

/// Same scheme with the reward negated and the kernel masked to the nonzero
/// entries of the adjacency, so only existing edges receive deletion mass.
/// Marginals are the degree distribution restricted to the support; the
/// result is clamped entrywise to the adjacency.
Eigen::MatrixXd solve_delta_minus(const Eigen::MatrixXd& adjacency,
                                  const Eigen::MatrixXd& laplacian, const Eigen::MatrixXd& theta,
                                  double eps, int iters);

/// V = clip(A + scale*delta_plus - scale*delta_minus, 0, 1), symmetrized and
/// diagonal zeroed. `scale` converts unit-mass plans into an edge budget
/// (callers typically pass rho * total edge weight).
Eigen::MatrixXd intervene(const Eigen::MatrixXd& adjacency, const InterventionPlan& plan,
                          double scale);

/// d/dTheta of <Theta L, Delta>^2 = 2 <Theta L, Delta> * (Delta Lᵀ).
Eigen::MatrixXd theta_objective_grad(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& laplacian,
                                     const Eigen::MatrixXd& delta);

/// Ascent step Theta + lr * grad_signal, entries clipped to [-1, 1].
Eigen::MatrixXd update_theta(const Eigen::MatrixXd& theta, const Eigen::MatrixXd& grad_signal,
                             double lr);

/// Entropy H(P) = -sum P .* (log P - 1), with 0 log 0 = 0.
double plan_entropy(const Eigen::MatrixXd& plan);

}  // namespace tgcc
