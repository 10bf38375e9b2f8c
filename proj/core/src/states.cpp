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

#include "embedgame/states.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "embedgame/errors.hpp"

namespace embedgame {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double hermitian_operator_norm(const Matrix& m) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

Matrix hermitian_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Eigen::VectorXd ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

namespace {

int checked_total_dim(const std::vector<int>& dims) {
  if (dims.empty()) throw ValidationError("register layout must be non-empty");
  long long total = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("register dimensions must be >= 1");
    total *= d;
    if (total > kMaxTotalDimension) {
      throw ValidationError("total dimension exceeds the supported cap of 64");
    }
  }
  return static_cast<int>(total);
}

}  // namespace

PureState::PureState(std::vector<int> dims_in, Vector amplitudes_in)
    : dims(std::move(dims_in)), amplitudes(std::move(amplitudes_in)) {
  const int total = checked_total_dim(dims);
  if (amplitudes.size() != total) {
    throw ValidationError("pure state: amplitude count must match the register layout");
  }
  if (std::abs(amplitudes.norm() - 1.0) > kStateNormTol) {
    throw ValidationError("pure state: norm must be 1 within 1e-10");
  }
}

PureState PureState::basis(std::vector<int> dims, int index) {
  const int total = checked_total_dim(dims);
  if (index < 0 || index >= total) throw ValidationError("basis index out of range");
  Vector amps = Vector::Zero(total);
  amps(index) = 1.0;
  return PureState(std::move(dims), std::move(amps));
}

DensityOp::DensityOp(std::vector<int> dims_in, Matrix matrix_in)
    : dims(std::move(dims_in)), matrix(std::move(matrix_in)) {
  const int total = checked_total_dim(dims);
  if (matrix.rows() != total || matrix.cols() != total) {
    throw ValidationError("density operator: shape must match the register layout");
  }
  if (hermiticity_defect(matrix) > kOperatorTol) {
    throw ValidationError("density operator: matrix must be Hermitian within 1e-10");
  }
  if (std::abs(matrix.trace().real() - 1.0) > kOperatorTol ||
      std::abs(matrix.trace().imag()) > kOperatorTol) {
    throw ValidationError("density operator: trace must be 1 within 1e-10");
  }
  matrix = hermitize(matrix);
  if (hermitian_eigenvalues(matrix)(0) < -kOperatorTol) {
    throw ValidationError("density operator: eigenvalues must be >= -1e-10");
  }
}

DensityOp::DensityOp(Trusted, std::vector<int> dims_in, Matrix matrix_in)
    : dims(std::move(dims_in)), matrix(hermitize(matrix_in)) {}

DensityOp DensityOp::trusted(std::vector<int> dims, Matrix matrix) {
  return DensityOp(Trusted{}, std::move(dims), std::move(matrix));
}

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ValidationError("overlap: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left side
}

double overlap(const PureState& a, const PureState& b) { return std::abs(inner(a, b)); }

DensityOp projector(const PureState& s) {
  return DensityOp::trusted(s.dims, s.amplitudes * s.amplitudes.adjoint());
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return PureState(std::move(dims), kron(a.amplitudes, b.amplitudes));
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep) {
  const int n = static_cast<int>(rho.dims.size());
  if (keep.empty()) throw ValidationError("partial_trace: keep list must be non-empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw ValidationError("partial_trace: index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw ValidationError("partial_trace: keep list must be strictly increasing");
    }
  }

  std::vector<int> traced;
  for (int i = 0; i < n; ++i) {
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);
  }

  // Row-major strides: dims[0] varies slowest.
  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * rho.dims[i + 1];

  // Enumerate flat offsets contributed by the kept and traced digit groups.
  const auto offsets = [&](const std::vector<int>& subsystems) {
    std::vector<long long> offs{0};
    for (int s : subsystems) {
      std::vector<long long> next;
      next.reserve(offs.size() * rho.dims[s]);
      for (long long base : offs) {
        for (int digit = 0; digit < rho.dims[s]; ++digit) {
          next.push_back(base + digit * stride[s]);
        }
      }
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<long long> kept_offsets = offsets(keep);
  const std::vector<long long> traced_offsets = offsets(traced);

  std::vector<int> out_dims;
  for (int k : keep) out_dims.push_back(rho.dims[k]);

  const std::size_t dk = kept_offsets.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex sum = 0.0;
      for (long long t : traced_offsets) {
        sum += rho.matrix(kept_offsets[a] + t, kept_offsets[b] + t);
      }
      out(a, b) = sum;
    }
  }
  return DensityOp::trusted(std::move(out_dims), std::move(out));
}

double von_neumann_entropy(const DensityOp& rho) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(rho.matrix);
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double v = ev(i);
    if (v < -kOperatorTol) {
      throw ValidationError("von_neumann_entropy: eigenvalue below -1e-10");
    }
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

PureState purify_choice(double p, const PureState& phi0, const PureState& phi1) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("purify_choice: p must be in [0, 1]");
  if (phi0.dims != phi1.dims) {
    throw ValidationError("purify_choice: the two branch states must share a register layout");
  }
  const int d = phi0.dim();
  Vector amps = Vector::Zero(2 * d);
  amps.head(d) = std::sqrt(p) * phi0.amplitudes;
  amps.tail(d) = std::sqrt(1.0 - p) * phi1.amplitudes;
  std::vector<int> dims{2};
  dims.insert(dims.end(), phi0.dims.begin(), phi0.dims.end());
  return PureState(std::move(dims), std::move(amps));
}

std::vector<PureState> gram_to_states(const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw ValidationError("gram_to_states: matrix must be square and non-empty");
  }
  if (hermiticity_defect(gram) > kOperatorTol) {
    throw ValidationError("gram_to_states: matrix must be Hermitian within 1e-10");
  }
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    if (std::abs(gram(i, i) - 1.0) > kOperatorTol) {
      throw ValidationError("gram_to_states: diagonal must be 1 within 1e-10");
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(gram));
  const Eigen::VectorXd ev = solver.eigenvalues();
  if (ev(0) < -kOperatorTol) {
    throw ValidationError("gram_to_states: matrix must be PSD within 1e-10");
  }

  // Columns of sqrt(Lambda_r) U_r^dagger realize the Gram matrix in dimension
  // rank(gram); descending order keeps the largest component first.
  std::vector<int> cols;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) > 1e-12) cols.push_back(static_cast<int>(i));
  }
  const int rank = static_cast<int>(cols.size());
  if (rank == 0) throw ValidationError("gram_to_states: matrix has rank 0");

  std::vector<PureState> states;
  states.reserve(gram.rows());
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    Vector v(rank);
    for (int r = 0; r < rank; ++r) {
      v(r) = std::sqrt(ev(cols[r])) * std::conj(solver.eigenvectors()(i, cols[r]));
    }
    v /= v.norm();  // unit diagonal already gives norm 1 up to roundoff
    states.emplace_back(std::vector<int>{rank}, std::move(v));
  }
  return states;
}

}  // namespace embedgame
