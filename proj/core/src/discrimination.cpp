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

#include "embedgame/discrimination.hpp"

#include <algorithm>
#include <cmath>

#include "embedgame/errors.hpp"

namespace embedgame {

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

DiscriminationBounds discrimination_bounds(double tau) {
  require_unit_interval(tau, "overlap");
  DiscriminationBounds b;
  b.tau = tau;
  b.idp_qc_max = 1.0 - tau;
  b.helstrom_qerr_min = (1.0 - std::sqrt(std::max(0.0, 1.0 - tau * tau))) / 2.0;
  return b;
}

Povm optimal_unambiguous_povm(const PureState& psi0, const PureState& psi1) {
  if (psi0.dims != psi1.dims) {
    throw ValidationError("states to discriminate must share dimensions");
  }
  const Complex gamma = inner(psi0, psi1);
  const double tau = std::abs(gamma);
  if (tau <= 1e-12) {
    throw ValidationError(
        "states are orthogonal; unambiguous discrimination is a projective "
        "measurement and the overlap construction degenerates");
  }
  if (tau >= 1.0 - 1e-12) {
    throw ValidationError("states are parallel; no measurement separates them");
  }

  // Orthonormal span basis: b1 = psi0 and b2 with psi1 = gamma b1 + s b2.
  const double s = std::sqrt(std::max(0.0, 1.0 - tau * tau));
  const Vector b1 = psi0.amplitudes;
  Vector b2 = psi1.amplitudes - gamma * b1;
  b2 /= b2.norm();

  // Vector orthogonal to psi1 inside the span, and b2 is orthogonal to psi0.
  const Vector perp1 = s * b1 - std::conj(gamma) * b2;

  const Eigen::Index d = b1.size();
  const double scale = 1.0 / (1.0 + tau);
  Matrix e0 = scale * (perp1 * perp1.adjoint());
  Matrix e1 = scale * (b2 * b2.adjoint());
  Matrix eq = Matrix::Identity(d, d) - e0 - e1;

  return Povm(psi0.dims, {std::move(e0), std::move(e1), std::move(eq)},
              {"0", "1", "?"});
}

double bc98_error_lower_bound(double q_c, double tau) {
  require_unit_interval(q_c, "conclusive rate");
  require_unit_interval(tau, "overlap");
  const double excess = q_c - (1.0 - tau);
  if (excess <= 0.0) return 0.0;
  const double inside = std::max(0.0, q_c * q_c - excess * excess);
  return (q_c - std::sqrt(inside)) / 2.0;
}

double conclusive_upper_bound(double q_err, double tau) {
  require_unit_interval(q_err, "error rate");
  require_unit_interval(tau, "overlap");
  const double bound =
      2.0 * q_err + (1.0 - tau) + 2.0 * std::sqrt(q_err * (1.0 - tau));
  return std::min(1.0, bound);
}

EigenAsymptoticsReport eigen_asymptotics_check(
    const std::function<Matrix(double)>& family, const PureState& v0,
    std::span<const double> c_grid) {
  if (!family) throw ValidationError("operator family is empty");
  if (v0.dim() != 2) {
    throw ValidationError("reference vector must live in dimension 2");
  }
  if (c_grid.empty()) throw ValidationError("grid of parameters is empty");
  for (double c : c_grid) {
    if (!(c >= 1.0)) {
      throw ValidationError("grid parameters must satisfy c >= 1");
    }
  }

  EigenAsymptoticsReport report;
  report.c_grid.assign(c_grid.begin(), c_grid.end());
  report.overlap_sq.reserve(c_grid.size());
  report.second_eigenvalue.reserve(c_grid.size());

  double kappa = 0.0;
  for (double c : c_grid) {
    Matrix f = family(c);
    if (f.rows() != 2 || f.cols() != 2) {
      throw ValidationError("operator family must produce 2x2 matrices");
    }
    if (hermiticity_defect(f) > 1e-10) {
      throw ValidationError("operator family must produce Hermitian matrices");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(f));
    const auto& evals = solver.eigenvalues();
    if (evals(0) < -1e-10) {
      throw ValidationError("operator family must be positive semidefinite");
    }
    if (std::abs(evals(1) - 1.0) > 1e-9) {
      throw ValidationError("operator family must have unit operator norm");
    }
    // A degenerate dominant subspace spans the whole qubit space and thus
    // contains a dominant eigenvector orthogonal to v0; the witnessed
    // overlap is zero in that case.
    double overlap_sq = 0.0;
    if (evals(1) - evals(0) >= 1e-12) {
      const Vector dominant = solver.eigenvectors().col(1);
      overlap_sq = std::norm(v0.amplitudes.dot(dominant));
    }
    const double second = std::max(0.0, evals(0));
    report.overlap_sq.push_back(overlap_sq);
    report.second_eigenvalue.push_back(second);
    kappa = std::max(kappa, c * std::max(overlap_sq, second));
  }
  report.fitted_kappa = kappa;
  return report;
}

}  // namespace embedgame
