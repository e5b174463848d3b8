// SPDX-License-Identifier: Apache-2.0
//
// phyauth: physical-layer assisted authentication for vehicular networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "phyauth/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "phyauth/errors.hpp"

namespace phyauth {

ComplexMat inverse_sqrt_hermitian(const ComplexMat& r, double relative_floor) {
  if (r.rows() != r.cols() || r.rows() == 0) {
    throw NumericalError("inverse square root needs a non-empty square matrix");
  }
  if (!r.allFinite()) {
    throw NumericalError("inverse square root of a non-finite matrix");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMat> eig(r);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = lambda.maxCoeff();
  if (!(top > 0.0)) {
    throw NumericalError("matrix is not positive definite");
  }
  const double floor = relative_floor * top;
  Eigen::VectorXd inv_sqrt(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    inv_sqrt(i) = 1.0 / std::sqrt(std::max(lambda(i), floor));
  }
  const ComplexMat& v = eig.eigenvectors();
  return v * inv_sqrt.cast<Complex>().asDiagonal() * v.adjoint();
}

bool is_hermitian(const ComplexMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_hermitian(const ComplexMat& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMat> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigendecomposition failed");
  }
  return eig.eigenvalues().minCoeff();
}

}  // namespace phyauth
