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
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "tgcc/errors.hpp"

namespace tgcc {

struct Splits {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

/// Immutable node-classification dataset: symmetric nonnegative adjacency
/// (no self-loops stored), dense features, class labels and disjoint splits.
/// All invariants are checked once at construction; instances are safe to
/// share across threads.
class Graph {
 public:
  /// Validates and builds. Throws StructuralError on a violated invariant.
  static Graph create(Eigen::SparseMatrix<double> adjacency, Eigen::MatrixXd features,
                      Eigen::VectorXi labels, Splits splits, int num_classes);

  int num_nodes() const { return n_; }
  int feature_dim() const { return static_cast<int>(features_.cols()); }
  int num_classes() const { return num_classes_; }

  const Eigen::SparseMatrix<double>& adjacency() const { return adjacency_; }
  Eigen::MatrixXd adjacency_dense() const { return Eigen::MatrixXd(adjacency_); }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXi& labels() const { return labels_; }
  const Splits& splits() const { return splits_; }

  double total_edge_weight() const { return adjacency_.sum(); }

  /// Train-split node ids grouped by class; classes with no train node get
  /// an empty bucket.
  std::vector<std::vector<int>> train_nodes_by_class() const;

 private:
  Graph(Eigen::SparseMatrix<double> adjacency, Eigen::MatrixXd features, Eigen::VectorXi labels,
        Splits splits, int num_classes)
      : n_(static_cast<int>(features.rows())),
        num_classes_(num_classes),
        adjacency_(std::move(adjacency)),
        features_(std::move(features)),
        labels_(std::move(labels)),
        splits_(std::move(splits)) {}

  int n_;
  int num_classes_;
  Eigen::SparseMatrix<double> adjacency_;
  Eigen::MatrixXd features_;
  Eigen::VectorXi labels_;
  Splits splits_;
};

/// L = I - D^{-1/2} A D^{-1/2} (symmetric normalized). Isolated nodes use a
/// zero scaling entry, which leaves 1 on the diagonal of their row.
Eigen::MatrixXd normalized_laplacian(const Eigen::MatrixXd& adjacency);
Eigen::MatrixXd normalized_laplacian(const Graph& g);

/// D~^{-1/2} (A + I) D~^{-1/2} with D~ the degree of A + I.
Eigen::MatrixXd gcn_normalize(const Eigen::MatrixXd& adjacency);
Eigen::MatrixXd gcn_normalize(const Graph& g);

/// Row-sum degree distributions normalized to probability vectors. Zero
/// degrees receive a 1e-8 floor before renormalization. Returns (a, b);
/// for a symmetric adjacency the two coincide.
std::pair<Eigen::VectorXd, Eigen::VectorXd> degree_marginals(const Eigen::MatrixXd& adjacency);
std::pair<Eigen::VectorXd, Eigen::VectorXd> degree_marginals(const Graph& g);

/// Throws StructuralError unless `m` is square and symmetric within `tol`.
void require_symmetric(const Eigen::MatrixXd& m, double tol, const char* what);

}  // namespace tgcc
