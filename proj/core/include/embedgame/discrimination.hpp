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

#ifndef EMBEDGAME_DISCRIMINATION_HPP_
#define EMBEDGAME_DISCRIMINATION_HPP_

#include <functional>
#include <span>

#include "embedgame/povm.hpp"
#include "embedgame/states.hpp"

namespace embedgame {

// Closed-form limits for discriminating two equiprobable pure states with
// overlap tau: the best zero-error conclusive rate and the minimum error rate
// of a forced-choice (always-conclusive) measurement.
struct DiscriminationBounds {
  double tau = 0.0;
  double idp_qc_max = 0.0;        // 1 - tau
  double helstrom_qerr_min = 0.0; // (1 - sqrt(1 - tau^2)) / 2
};

DiscriminationBounds discrimination_bounds(double tau);

// The optimal unambiguous discriminator for two equiprobable pure states:
// outcomes "0", "1", "?" with zero cross-identification error and conclusive
// probability exactly 1 - tau on each input. Throws ValidationError for
// (numerically) parallel or orthogonal inputs.
Povm optimal_unambiguous_povm(const PureState& psi0, const PureState& psi1);

// Highest unconditional error rate that any measurement with conclusive rate
// q_c can avoid: q_err >= (q_c - sqrt(q_c^2 - (q_c - (1-tau))^2)) / 2, zero
// whenever q_c <= 1 - tau.
double bc98_error_lower_bound(double q_c, double tau);

// Converse: a measurement with unconditional error rate q_err has conclusive
// rate at most 2 q_err + 1 - tau + 2 sqrt(q_err (1-tau)), clamped to 1.
double conclusive_upper_bound(double q_err, double tau);

// Dominant-eigenvector decay data for a one-parameter operator family: at
// each grid value c the family must produce a 2x2 PSD matrix of unit operator
// norm; the report captures the squared overlap of `v0` with the dominant
// eigenvector, the second eigenvalue, and the smallest kappa with
// max(overlap_sq, second_eigenvalue) <= kappa / c across the grid.
struct EigenAsymptoticsReport {
  std::vector<double> c_grid;
  std::vector<double> overlap_sq;
  std::vector<double> second_eigenvalue;
  double fitted_kappa = 0.0;
};

EigenAsymptoticsReport eigen_asymptotics_check(
    const std::function<Matrix(double)>& family, const PureState& v0,
    std::span<const double> c_grid);

}  // namespace embedgame

#endif  // EMBEDGAME_DISCRIMINATION_HPP_
