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
#include "tgcc/relay.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tgcc/rng.hpp"

namespace tgcc {

RelayModel init_model(int d, int h, int num_classes, std::uint64_t seed) {
  if (d < 1 || h < 1 || num_classes < 1)
    throw ArgumentError("init_model: d, h, C must all be >= 1");
  std::mt19937_64 rng(seed);
  RelayModel model;
  model.hidden = h;
  model.seed = seed;
  const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(h));
  model.w1.resize(d, h);
  model.w2.resize(h, num_classes);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < h; ++j) model.w1(i, j) = uniform_pm(rng, s1);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < num_classes; ++j) model.w2(i, j) = uniform_pm(rng, s2);
  return model;
}

ForwardResult forward(const RelayModel& model, const Eigen::MatrixXd& prop,
                      const Eigen::MatrixXd& x) {
  if (prop.rows() != prop.cols() || prop.rows() != x.rows())
    throw StructuralError("forward: propagation matrix and features disagree on node count");
  if (x.cols() != model.w1.rows())
    throw StructuralError("forward: feature dimension does not match W1");
  ForwardResult out;
  out.embeddings = (prop * (x * model.w1)).cwiseMax(0.0);
  out.logits = prop * (out.embeddings * model.w2);
  return out;
}

double softmax_cross_entropy(const Eigen::MatrixXd& logits, const Eigen::VectorXi& y,
                             const std::vector<int>& mask) {
  if (mask.empty()) throw ArgumentError("softmax_cross_entropy: empty mask");
  double total = 0.0;
  for (int i : mask) {
    const auto row = logits.row(i);
    double mx = row.maxCoeff();
    double lse = std::log((row.array() - mx).exp().sum()) + mx;
    total += lse - row[y[i]];
  }
  return total / static_cast<double>(mask.size());
}

LossGrad loss_and_grad(const RelayModel& model, const Eigen::MatrixXd& prop,
                       const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                       const std::vector<int>& mask) {
  if (mask.empty()) throw ArgumentError("loss_and_grad: empty mask");
  if (y.size() != x.rows()) throw StructuralError("loss_and_grad: labels length mismatch");

  const int n = static_cast<int>(x.rows());
  const int num_classes = static_cast<int>(model.w2.cols());

  Eigen::MatrixXd pre = prop * (x * model.w1);       // n x h
  Eigen::MatrixXd hid = pre.cwiseMax(0.0);           // n x h
  Eigen::MatrixXd z2 = prop * hid;                   // n x h
  Eigen::MatrixXd logits = z2 * model.w2;            // n x C

  // dL/dlogits, nonzero only on masked rows; weight = multiplicity / |mask|.
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  for (int i : mask) {
    if (i < 0 || i >= n)
      throw StructuralError("loss_and_grad: mask index " + std::to_string(i) + " out of range");
    weight[i] += 1.0 / static_cast<double>(mask.size());
  }

  double loss = 0.0;
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(n, num_classes);
  for (int i = 0; i < n; ++i) {
    if (weight[i] == 0.0) continue;
    const auto row = logits.row(i);
    double mx = row.maxCoeff();
    Eigen::RowVectorXd ex = (row.array() - mx).exp();
    double denom = ex.sum();
    loss += weight[i] * (std::log(denom) + mx - row[y[i]]);
    dlogits.row(i) = weight[i] * (ex / denom);
    dlogits(i, y[i]) -= weight[i];
  }

  LossGrad out;
  out.loss = loss;
  out.grads.g_w2 = z2.transpose() * dlogits;
  Eigen::MatrixXd dhid = prop.transpose() * (dlogits * model.w2.transpose());
  Eigen::MatrixXd dpre = ((pre.array() > 0.0).cast<double>() * dhid.array()).matrix();
  out.grads.g_w1 = x.transpose() * (prop.transpose() * dpre);
  return out;
}

RelayModel sgd_step(const RelayModel& model, const GradientSet& grads, double lr) {
  if (lr < 0.0) throw ArgumentError("sgd_step: lr must be > 0");
  RelayModel next = model;
  next.w1 -= lr * grads.g_w1;
  next.w2 -= lr * grads.g_w2;
  return next;
}

}  // namespace tgcc
