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

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace phyauth {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Hermitian inverse square root R^{-1/2} via eigendecomposition.
///
/// Eigenvalues below `relative_floor * max_eigenvalue` are clamped to that
/// floor. Throws NumericalError when the matrix is not positive definite
/// (largest eigenvalue not strictly positive) or contains non-finite values.
ComplexMat inverse_sqrt_hermitian(const ComplexMat& r, double relative_floor = 1e-12);

/// True when `m` is Hermitian to within `tol` (max-abs entrywise).
bool is_hermitian(const ComplexMat& m, double tol = 1e-12);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue_hermitian(const ComplexMat& m);

}  // namespace phyauth
