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

/// Per-dimension normalization: each column mean-centered then scaled to
/// unit L2 norm. `std` holds the pre-normalization population standard
/// deviation (divisor n). An all-constant column maps to the zero column
/// with std 0.
struct NormalizedDims {
  Eigen::MatrixXd zbar;
  Eigen::VectorXd std;
};

NormalizedDims normalize_dims(const Eigen::MatrixXd& z);

/// Sum over i != j of squared sample covariance (divisor n-1) between
/// columns i and j. Columns are expected to be centered.
double covariance_offdiag_sq(const Eigen::MatrixXd& zbar);

/// (1/(n-1)^2) Tr(Ki H Kj H) with linear-kernel Gram matrices Ki = zi ziᵀ
/// and H the centering matrix. Built literally from the n x n kernels so it
/// can serve as an independent oracle for covariance_offdiag_sq.
double hsic_linear(const Eigen::VectorXd& zi, const Eigen::VectorXd& zj);

/// Embeddings of the same encoder on the original view (A) and the
/// intervened view (V), with their per-dimension normalizations.
struct EmbeddingPair {
  Eigen::MatrixXd za;
  Eigen::MatrixXd zv;
  NormalizedDims norm_a;
  NormalizedDims norm_v;
};

EmbeddingPair make_embedding_pair(Eigen::MatrixXd za, Eigen::MatrixXd zv);

struct CausalLossTerms {
  double alignment = 0.0;     // sum of column inner products of the views
  double std_penalty = 0.0;   // sum |s_i - lambda| over both views
  double independence = 0.0;  // off-diagonal covariance energy, both views
  double total = 0.0;         // -alpha*alignment + beta*std_penalty + gamma*independence
  double alpha = 0.0, beta = 0.0, gamma = 0.0, lambda_target = 0.0;
};

CausalLossTerms causal_loss(const EmbeddingPair& pair, double alpha, double beta, double gamma,
                            double lambda_target);

/// Loss plus analytic gradients with respect to the raw (pre-normalization)
/// embeddings, for encoder training.
struct CausalLossGrad {
  CausalLossTerms terms;
  Eigen::MatrixXd d_za;
  Eigen::MatrixXd d_zv;
};

CausalLossGrad causal_loss_grad(const Eigen::MatrixXd& za, const Eigen::MatrixXd& zv, double alpha,
                                double beta, double gamma, double lambda_target);

}  // namespace tgcc
