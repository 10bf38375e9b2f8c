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

#include "embedgame/povm.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "embedgame/errors.hpp"
#include "embedgame/rng.hpp"

namespace embedgame {

Povm::Povm(std::vector<int> dims_in, std::vector<Matrix> elements_in,
           std::vector<std::string> labels_in)
    : dims(std::move(dims_in)), elements(std::move(elements_in)), labels(std::move(labels_in)) {
  if (elements.empty()) throw ValidationError("povm: needs at least one element");
  if (labels.size() != elements.size()) {
    throw ValidationError("povm: one label per element required");
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw ValidationError("povm: labels must be unique");
  }
  long long total = 1;
  for (int d : dims) total *= d;
  Matrix sum = Matrix::Zero(total, total);
  for (const Matrix& e : elements) {
    if (e.rows() != total || e.cols() != total) {
      throw ValidationError("povm: element shape must match the register layout");
    }
    if (hermiticity_defect(e) > kOperatorTol) {
      throw ValidationError("povm: elements must be Hermitian within 1e-10");
    }
    if (hermitian_eigenvalues(e)(0) < -kOperatorTol) {
      throw ValidationError("povm: elements must be PSD within 1e-10");
    }
    sum += e;
  }
  sum -= Matrix::Identity(total, total);
  if (hermitian_operator_norm(hermitize(sum)) > kPovmSumTol) {
    throw ValidationError("povm: elements must sum to the identity within 1e-9");
  }
}

Povm Povm::computational(std::vector<int> dims, std::vector<std::string> labels) {
  long long total = 1;
  for (int d : dims) total *= d;
  std::vector<Matrix> elements;
  elements.reserve(total);
  for (long long k = 0; k < total; ++k) {
    Matrix e = Matrix::Zero(total, total);
    e(k, k) = 1.0;
    elements.push_back(std::move(e));
  }
  if (labels.empty()) {
    for (long long k = 0; k < total; ++k) labels.push_back(std::to_string(k));
  }
  return Povm(std::move(dims), std::move(elements), std::move(labels));
}

std::vector<double> outcome_probabilities(const DensityOp& rho, const Povm& m) {
  if (rho.dims != m.dims) {
    throw ValidationError("measure: POVM register layout must match the state");
  }
  std::vector<double> probs(m.size(), 0.0);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double p = (m.elements[k] * rho.matrix).trace().real();
    probs[k] = p > 0.0 ? p : 0.0;
  }
  return probs;
}

MeasurementRecord measure(const DensityOp& rho, const Povm& m, std::uint64_t seed) {
  const std::vector<double> probs = outcome_probabilities(rho, m);
  double max_p = 0.0;
  for (double p : probs) max_p = std::max(max_p, p);
  if (max_p < 1e-12) {
    throw ValidationError("measure: all outcome probabilities below 1e-12");
  }

  Rng rng(seed);
  const std::size_t k = rng.pick(probs);
  const double p = probs[k];

  const Matrix root = hermitian_sqrt(m.elements[k]);
  Matrix post = root * rho.matrix * root;
  post /= post.trace().real();
  return MeasurementRecord{k, m.labels[k], p, DensityOp::trusted(rho.dims, std::move(post))};
}

}  // namespace embedgame
