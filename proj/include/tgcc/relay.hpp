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
#include <cstdint>
#include <vector>

#include "tgcc/errors.hpp"

namespace tgcc {

/// Two-layer GCN with rectifier activation, no bias, no dropout:
///   logits = P * relu(P * X * W1) * W2.
/// Forward, loss and parameter gradients are evaluated analytically so that
/// training is deterministic and checkable against finite differences.
struct RelayModel {
  Eigen::MatrixXd w1;  // d x h
  Eigen::MatrixXd w2;  // h x C
  int hidden = 0;
  std::uint64_t seed = 0;
};

struct GradientSet {
  Eigen::MatrixXd g_w1;
  Eigen::MatrixXd g_w2;
};

struct ForwardResult {
  Eigen::MatrixXd logits;      // n x C
  Eigen::MatrixXd embeddings;  // n x h, post-activation hidden layer
};

struct LossGrad {
  double loss = 0.0;
  GradientSet grads;
};

/// Weights drawn uniformly in ±1/sqrt(fan-in); bit-reproducible per seed.
RelayModel init_model(int d, int h, int num_classes, std::uint64_t seed);

ForwardResult forward(const RelayModel& model, const Eigen::MatrixXd& prop,
                      const Eigen::MatrixXd& x);

/// Mean softmax cross-entropy over `mask` (duplicates allowed; the mean is
/// over occurrences) with exact analytic gradients for both layers.
LossGrad loss_and_grad(const RelayModel& model, const Eigen::MatrixXd& prop,
                       const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const std::vector<int>& mask);

RelayModel sgd_step(const RelayModel& model, const GradientSet& grads, double lr);

/// Mean masked cross-entropy of precomputed logits (used by evaluation code
/// and as an independent check of loss_and_grad).
double softmax_cross_entropy(const Eigen::MatrixXd& logits, const Eigen::VectorXi& y,
                             const std::vector<int>& mask);

}  // namespace tgcc
