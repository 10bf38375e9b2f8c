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

#ifndef EMBEDGAME_POVM_HPP_
#define EMBEDGAME_POVM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "embedgame/states.hpp"

namespace embedgame {

// A positive-operator-valued measure with labeled outcomes.
struct Povm {
  std::vector<int> dims;
  std::vector<Matrix> elements;
  std::vector<std::string> labels;

  // Validates: at least one element, one unique label per element, each
  // element Hermitian PSD within kOperatorTol, and the sum equal to the
  // identity within kPovmSumTol in operator norm.
  Povm(std::vector<int> dims, std::vector<Matrix> elements, std::vector<std::string> labels);

  int dim() const { return static_cast<int>(elements.front().rows()); }
  std::size_t size() const { return elements.size(); }

  // Measurement in the computational basis of the given register layout,
  // labeled by the provided outcome names (defaults to "0", "1", ...).
  static Povm computational(std::vector<int> dims, std::vector<std::string> labels = {});
};

struct MeasurementRecord {
  std::size_t outcome_index = 0;
  std::string outcome_label;
  double probability = 0.0;
  DensityOp residual;
};

// Born-rule outcome probabilities tr(E_k rho), clamped at zero.
std::vector<double> outcome_probabilities(const DensityOp& rho, const Povm& m);

// One sampled measurement with the Lueders update
// residual = sqrt(E) rho sqrt(E) / p. Throws ValidationError if every outcome
// probability is below 1e-12 (the POVM cannot be valid on rho's support).
MeasurementRecord measure(const DensityOp& rho, const Povm& m, std::uint64_t seed);

}  // namespace embedgame

#endif  // EMBEDGAME_POVM_HPP_
