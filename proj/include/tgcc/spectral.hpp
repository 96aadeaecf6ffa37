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

inline constexpr int kDefaultEigenCap = 5000;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, one orthonormal
/// eigenvector per column.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Full dense eigendecomposition with a deterministic sign convention: the
/// largest-magnitude component of each eigenvector is made positive.
/// Throws CapacityError for n > cap (subsample the graph first) and
/// StructuralError for a non-symmetric input.
SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& sym, int cap = kDefaultEigenCap);

}  // namespace tgcc
