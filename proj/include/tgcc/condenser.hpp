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

#include "tgcc/graph.hpp"
#include "tgcc/relay.hpp"

namespace tgcc {

/// Learnable condensed dataset. In `logits` mode the adjacency is
/// sigmoid(adj_logits) with zero diagonal (symmetric by construction); in
/// `fixed` mode the adjacency is a constant matrix (coreset subgraphs).
/// Labels are fixed for the lifetime of the object.
struct SyntheticGraph {
  enum class AdjacencyMode { logits, fixed };

  Eigen::MatrixXd xs;          // m x d, learnable
  Eigen::MatrixXd adj_logits;  // m x m symmetric, learnable (logits mode)
  Eigen::MatrixXd adj_fixed;   // m x m (fixed mode)
  Eigen::VectorXi ys;          // m, fixed
  AdjacencyMode mode = AdjacencyMode::logits;
  int num_classes = 0;

  int m() const { return static_cast<int>(xs.rows()); }
  bool learnable_adjacency() const { return mode == AdjacencyMode::logits; }

  /// sigmoid(adj_logits) with zero diagonal, or the fixed matrix.
  Eigen::MatrixXd materialize_adjacency() const;

  /// Unweighted materialization: entries below `threshold` dropped, the
  /// rest set to 1.
  Eigen::MatrixXd materialize_sparsified(double threshold = 0.5) const;

  std::vector<std::vector<int>> nodes_by_class() const;
  std::vector<int> class_histogram() const;
};

/// Proportional allocation of m slots over per-class counts using largest
/// remainders, with a floor of one slot per class. Deterministic.
std::vector<int> allocate_per_class(const std::vector<int>& counts, int m, int num_classes);

/// Builds a synthetic graph with m = max(C, round(r * N)) nodes, labels
/// allocated from the train-split class histogram, features sampled from
/// train nodes of the matching class, and near-empty adjacency logits.
/// Warns on stderr when the class floor raises m above round(r * N).
SyntheticGraph init_synthetic(const Graph& g, double r, std::uint64_t seed);

/// Sum over layers and output columns of (1 - cosine similarity) between
/// corresponding gradient columns. A pair of zero columns contributes 0,
/// a single zero column contributes 1.
double grad_distance(const GradientSet& ga, const GradientSet& gb);

/// One side of the gradient-matching comparison: a propagation matrix plus
/// the features, labels and per-class masks gradients are taken against.
struct MatchView {
  Eigen::MatrixXd prop;
  Eigen::MatrixXd features;
  Eigen::VectorXi labels;
  std::vector<std::vector<int>> masks_by_class;
};

/// View of the original graph (train-split masks).
MatchView make_match_view(const Graph& g);
/// View of the augmented graph: intervened adjacency, shared X and Y.
MatchView make_match_view(const Graph& g, const Eigen::MatrixXd& v_adjacency);

struct CondensationGrad {
  double loss = 0.0;
  Eigen::MatrixXd d_xs;      // m x d
  Eigen::MatrixXd d_logits;  // m x m symmetric; empty in fixed mode
};

/// Per-class gradient matching of the synthetic graph against both views at
/// the relay's current parameters:
///   sum_c D(grad_real_c, grad_syn_c) + D(grad_aug_c, grad_syn_c).
/// Gradients with respect to xs and adj_logits are computed in closed form
/// by differentiating through the relay's analytic gradients.
CondensationGrad condensation_loss(const MatchView& real, const MatchView& aug,
                                   const SyntheticGraph& syn, const RelayModel& relay);

/// Adjoint of gcn_normalize: given dL/dP, returns dL/dA (diagonal zeroed).
Eigen::MatrixXd gcn_normalize_vjp(const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& d_prop);

/// Chains an adjacency gradient through A = sigmoid(adj_logits) with the
/// mirrored upper-triangle parameterization; returns a symmetric matrix.
Eigen::MatrixXd adjacency_grad_to_logits(const SyntheticGraph& syn, const Eigen::MatrixXd& d_adj);

struct AdamState {
  Eigen::MatrixXd m1;
  Eigen::MatrixXd m2;
  int t = 0;
};

/// In-place Adam update (beta1 0.9, beta2 0.999).
void adam_step(Eigen::MatrixXd& param, AdamState& state, const Eigen::MatrixXd& grad, double lr);

struct SynLearningRates {
  double lr_x = 0.01;
  double lr_adj = 0.01;
  double lr_relay = 0.01;
  bool adam = true;  // Adam for xs / adj_logits; the relay always uses sgd_step
};

/// Extra gradients (e.g. a contrastive term) folded into the synthetic
/// update alongside the matching gradient.
struct AuxGrad {
  const Eigen::MatrixXd* d_xs = nullptr;
  const Eigen::MatrixXd* d_logits = nullptr;
};

struct MatchState {
  int step = 0;
  int horizon = 0;
  RelayModel relay;
  std::vector<double> trace;
  AdamState adam_x;
  AdamState adam_adj;
};

/// One outer iteration: update the synthetic graph by one descent step on
/// matching_weight * matching loss (plus aux gradients), then advance the
/// relay by `inner_steps` sgd steps on the synthetic cross-entropy only.
/// Real-graph gradients never touch the relay parameters.
void outer_step(MatchState& state, const MatchView& real, const MatchView& aug,
                SyntheticGraph& syn, const SynLearningRates& lrs, int inner_steps,
                const AuxGrad& aux = {}, double matching_weight = 1.0);

}  // namespace tgcc
