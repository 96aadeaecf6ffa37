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
#include "tgcc/spectral.hpp"

#include <cmath>
#include <string>

#include "tgcc/graph.hpp"

namespace tgcc {

SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& sym, int cap) {
  require_symmetric(sym, 1e-9, "spectral_decompose");
  const int n = static_cast<int>(sym.rows());
  if (n > cap)
    throw CapacityError("spectral_decompose: n = " + std::to_string(n) + " exceeds the dense cap " +
                        std::to_string(cap) + "; subsample the graph before decomposing");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericError("spectral_decompose: eigensolver failed to converge");

  SpectralDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    dec.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (dec.eigenvectors(arg, j) < 0.0) dec.eigenvectors.col(j) = -dec.eigenvectors.col(j);
  }
  return dec;
}

}  // namespace tgcc
