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
#include "tgcc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace tgcc {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kDegreeFloor = 1e-8;

void check_splits(const std::vector<int>& ids, int n, std::unordered_set<int>& seen,
                  const char* name) {
  for (int idx : ids) {
    if (idx < 0 || idx >= n)
      throw StructuralError(std::string("split '") + name + "' index " + std::to_string(idx) +
                            " out of range [0, " + std::to_string(n) + ")");
    if (!seen.insert(idx).second)
      throw StructuralError(std::string("splits are not disjoint: node ") + std::to_string(idx) +
                            " appears twice");
  }
}

}  // namespace

void require_symmetric(const Eigen::MatrixXd& m, double tol, const char* what) {
  if (m.rows() != m.cols())
    throw StructuralError(std::string(what) + ": matrix is not square");
  double diff = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (diff > tol)
    throw StructuralError(std::string(what) + ": matrix not symmetric (max asymmetry " +
                          std::to_string(diff) + ")");
}

Graph Graph::create(Eigen::SparseMatrix<double> adjacency, Eigen::MatrixXd features,
                    Eigen::VectorXi labels, Splits splits, int num_classes) {
  const int n = static_cast<int>(features.rows());
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw StructuralError("adjacency shape does not match feature row count");
  if (labels.size() != n) throw StructuralError("labels length does not match node count");
  if (num_classes < 1) throw StructuralError("num_classes must be >= 1");

  adjacency.makeCompressed();
  for (int k = 0; k < adjacency.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency, k); it; ++it) {
      if (it.value() < 0.0)
        throw StructuralError("adjacency has a negative entry");
      if (it.row() == it.col() && it.value() != 0.0)
        throw StructuralError("adjacency stores a self-loop at node " +
                              std::to_string(it.row()));
    }
  }
  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(adjacency.transpose()) - adjacency;
  double asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  if (asym > kSymmetryTol)
    throw StructuralError("adjacency not symmetric (max asymmetry " + std::to_string(asym) + ")");

  std::vector<bool> present(num_classes, false);
  for (int i = 0; i < n; ++i) {
    int c = labels[i];
    if (c < 0 || c >= num_classes)
      throw StructuralError("label " + std::to_string(c) + " of node " + std::to_string(i) +
                            " outside [0, " + std::to_string(num_classes) + ")");
    present[c] = true;
  }
  for (int c = 0; c < num_classes; ++c)
    if (!present[c])
      throw StructuralError("class " + std::to_string(c) + " never appears in labels");

  std::unordered_set<int> seen;
  check_splits(splits.train, n, seen, "train");
  check_splits(splits.val, n, seen, "val");
  check_splits(splits.test, n, seen, "test");

  return Graph(std::move(adjacency), std::move(features), std::move(labels), std::move(splits),
               num_classes);
}

std::vector<std::vector<int>> Graph::train_nodes_by_class() const {
  std::vector<std::vector<int>> buckets(num_classes_);
  for (int idx : splits_.train) buckets[labels_[idx]].push_back(idx);
  return buckets;
}

Eigen::MatrixXd normalized_laplacian(const Eigen::MatrixXd& adjacency) {
  require_symmetric(adjacency, 1e-9, "normalized_laplacian");
  if (adjacency.minCoeff() < 0.0)
    throw StructuralError("normalized_laplacian: adjacency has a negative entry");
  const int n = static_cast<int>(adjacency.rows());
  Eigen::VectorXd deg = adjacency.rowwise().sum();
  Eigen::VectorXd dinv_sqrt(n);
  for (int i = 0; i < n; ++i) dinv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;
  Eigen::MatrixXd lap =
      -(dinv_sqrt.asDiagonal() * adjacency * dinv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  return lap;
}

Eigen::MatrixXd normalized_laplacian(const Graph& g) {
  return normalized_laplacian(g.adjacency_dense());
}

Eigen::MatrixXd gcn_normalize(const Eigen::MatrixXd& adjacency) {
  require_symmetric(adjacency, 1e-9, "gcn_normalize");
  if (adjacency.minCoeff() < 0.0)
    throw StructuralError("gcn_normalize: adjacency has a negative entry");
  Eigen::MatrixXd with_loops = adjacency;
  with_loops.diagonal().array() += 1.0;
  Eigen::VectorXd deg = with_loops.rowwise().sum();
  Eigen::VectorXd dinv_sqrt = deg.array().rsqrt();  // deg >= 1 by construction
  return dinv_sqrt.asDiagonal() * with_loops * dinv_sqrt.asDiagonal();
}

Eigen::MatrixXd gcn_normalize(const Graph& g) { return gcn_normalize(g.adjacency_dense()); }

std::pair<Eigen::VectorXd, Eigen::VectorXd> degree_marginals(const Eigen::MatrixXd& adjacency) {
  Eigen::VectorXd deg = adjacency.rowwise().sum();
  for (int i = 0; i < deg.size(); ++i)
    if (deg[i] <= 0.0) deg[i] = kDegreeFloor;
  deg /= deg.sum();
  return {deg, deg};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> degree_marginals(const Graph& g) {
  Eigen::VectorXd deg(g.num_nodes());
  deg.setZero();
  const auto& adj = g.adjacency();
  for (int k = 0; k < adj.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(adj, k); it; ++it)
      deg[it.row()] += it.value();
  for (int i = 0; i < deg.size(); ++i)
    if (deg[i] <= 0.0) deg[i] = kDegreeFloor;
  deg /= deg.sum();
  return {deg, deg};
}

}  // namespace tgcc
