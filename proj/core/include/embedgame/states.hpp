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

#ifndef EMBEDGAME_STATES_HPP_
#define EMBEDGAME_STATES_HPP_

#include <vector>

#include "embedgame/linalg.hpp"

namespace embedgame {

// Everything here targets desk-scale instances; total dimension is capped so
// mistakes fail fast instead of allocating gigabytes.
inline constexpr int kMaxTotalDimension = 64;

// Tolerances for the quantum layer.
inline constexpr double kStateNormTol = 1e-10;    // pure-state normalization
inline constexpr double kOperatorTol = 1e-10;     // Hermiticity / PSD / trace
inline constexpr double kPovmSumTol = 1e-9;       // completeness, operator norm

// A normalized pure state on an ordered tensor product of small registers.
struct PureState {
  std::vector<int> dims;
  Vector amplitudes;

  // Validates: dims all >= 1, product of dims == amplitudes.size() and
  // <= kMaxTotalDimension, norm within kStateNormTol of 1.
  PureState(std::vector<int> dims, Vector amplitudes);

  int dim() const { return static_cast<int>(amplitudes.size()); }

  // Computational basis vector |index> on the given register layout.
  static PureState basis(std::vector<int> dims, int index);
};

// A density operator on an ordered tensor product of small registers.
struct DensityOp {
  std::vector<int> dims;
  Matrix matrix;

  // Validates: shape matches dims, Hermitian within kOperatorTol, eigenvalues
  // >= -kOperatorTol, trace within kOperatorTol of 1.
  DensityOp(std::vector<int> dims, Matrix matrix);

  int dim() const { return static_cast<int>(matrix.rows()); }

  // Fast path for matrices produced by the library itself (already known to
  // satisfy the invariants up to roundoff): hermitizes but skips the
  // eigenvalue check.
  static DensityOp trusted(std::vector<int> dims, Matrix matrix);

 private:
  struct Trusted {};
  DensityOp(Trusted, std::vector<int> dims, Matrix matrix);
};

// <a|b>, with conjugation on the left argument.
Complex inner(const PureState& a, const PureState& b);

// |<a|b>|.
double overlap(const PureState& a, const PureState& b);

DensityOp projector(const PureState& s);

PureState tensor(const PureState& a, const PureState& b);

// Reduced operator on the subsystems listed in `keep` (strictly increasing
// indices into rho.dims); the rest are traced out.
DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep);

// Von Neumann entropy in bits. Eigenvalues in [-kOperatorTol, 0) are clamped
// to zero; anything lower throws ValidationError.
double von_neumann_entropy(const DensityOp& rho);

// sqrt(p)|0>|phi0> + sqrt(1-p)|1>|phi1> with register layout {2} + phi dims.
// phi0 and phi1 must share a layout; requires 0 <= p <= 1.
PureState purify_choice(double p, const PureState& phi0, const PureState& phi1);

// A family of unit vectors realizing the given Gram matrix (Hermitian PSD
// with unit diagonal), in dimension rank(gram). gram_to_states(G)[i] dotted
// with gram_to_states(G)[j] reproduces G(i,j) up to roundoff.
std::vector<PureState> gram_to_states(const Matrix& gram);

}  // namespace embedgame

#endif  // EMBEDGAME_STATES_HPP_
