// Copyright 2026 The Embedgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBEDGAME_LINALG_HPP_
#define EMBEDGAME_LINALG_HPP_

#include <Eigen/Dense>
#include <complex>

namespace embedgame {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// max_i |a_ij - conj(a_ji)| deviation from Hermiticity.
double hermiticity_defect(const Matrix& m);

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

// Largest-magnitude eigenvalue of a Hermitian matrix.
double hermitian_operator_norm(const Matrix& m);

// Principal square root of a PSD matrix (negative eigenvalues from roundoff
// are clamped to zero).
Matrix hermitian_sqrt(const Matrix& m);

// Nearest Hermitian matrix, (m + m^dagger)/2; used to stop roundoff drift.
Matrix hermitize(const Matrix& m);

}  // namespace embedgame

#endif  // EMBEDGAME_LINALG_HPP_
