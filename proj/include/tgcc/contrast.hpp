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
#include <vector>

#include "tgcc/errors.hpp"
#include "tgcc/spectral.hpp"

namespace tgcc {

/// A spectrally perturbed graph: the normalized Laplacian rebuilt from the
/// high-frequency eigencomponents only (ascending index >= kept_index_start,
/// where kept_index_start = floor((1-kappa) * n / 2)), and the adjacency
/// recovered from it through the original degree matrix.
struct NegativeSample {
  Eigen::MatrixXd laplacian_hat;
  Eigen::MatrixXd adjacency_neg;
  double kappa = 0.0;
  int kept_index_start = 0;
};

/// Builds the negative by decomposing the symmetric normalized Laplacian of
/// `v_adjacency`. kappa = 1 keeps every component (round trip); kappa = 0
/// keeps exactly the upper half of the spectrum.
NegativeSample build_negative(const Eigen::MatrixXd& v_adjacency, double kappa,
                              int cap = kDefaultEigenCap);

/// Same construction reusing an existing decomposition of the Laplacian,
/// so several kappa values share one eigensolve.
NegativeSample build_negative_from(const SpectralDecomposition& dec,
                                   const Eigen::VectorXd& degrees, double kappa);

/// Column-wise mean (graph-level readout).
Eigen::VectorXd readout(const Eigen::MatrixXd& z);

/// InfoNCE with cosine similarity at temperature t:
///   -log exp(phi(i,j)/t) / (exp(phi(i,j)/t) + sum_m exp(phi(i,m)/t)).
/// A zero-norm vector has cosine 0 against everything.
double infonce(const Eigen::VectorXd& pos_i, const Eigen::VectorXd& pos_j,
               const std::vector<Eigen::VectorXd>& negatives, double t);

struct InfoNceGrad {
  double loss = 0.0;
  Eigen::VectorXd d_pos_i;
  Eigen::VectorXd d_pos_j;
  std::vector<Eigen::VectorXd> d_negatives;
};

InfoNceGrad infonce_grad(const Eigen::VectorXd& pos_i, const Eigen::VectorXd& pos_j,
                         const std::vector<Eigen::VectorXd>& negatives, double t);

}  // namespace tgcc
