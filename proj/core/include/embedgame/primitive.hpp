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

#ifndef EMBEDGAME_PRIMITIVE_HPP_
#define EMBEDGAME_PRIMITIVE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace embedgame {

// Tolerances used by the classical layer.
inline constexpr double kProbabilitySumTol = 1e-12;   // joint must sum to 1
inline constexpr double kRowEqualityTol = 1e-9;       // total-variation row grouping
inline constexpr double kEntropyTol = 1e-9;           // entropy identities / triviality

// A two-party randomized primitive: the joint distribution P_{X,Y} of the
// (sender, receiver) outputs, with string labels for both alphabets.
class Primitive {
 public:
  // `probs[x][y]` is P(X = x, Y = y), row-major over the x alphabet.
  // Validates: non-empty alphabets, unique labels, rectangular matrix,
  // entries >= 0, total within kProbabilitySumTol of 1.
  Primitive(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
            std::vector<std::vector<double>> probs);

  std::size_t x_size() const { return x_labels_.size(); }
  std::size_t y_size() const { return y_labels_.size(); }
  const std::vector<std::string>& x_alphabet() const { return x_labels_; }
  const std::vector<std::string>& y_alphabet() const { return y_labels_; }
  double prob(std::size_t x, std::size_t y) const { return probs_[x][y]; }
  const std::vector<std::vector<double>>& joint() const { return probs_; }

  std::vector<double> x_marginal() const;
  std::vector<double> y_marginal() const;

  // P_{Y|X=x}; all-zero if the row has zero probability.
  std::vector<double> row_conditional(std::size_t x) const;

  // The same primitive with the roles of the two parties swapped.
  Primitive transposed() const;

  // Index of a label, or throws ValidationError.
  std::size_t x_index(const std::string& label) const;

 private:
  std::vector<std::string> x_labels_;
  std::vector<std::string> y_labels_;
  std::vector<std::vector<double>> probs_;
};

// Grouping of sender symbols by equal conditional rows P_{Y|X=x}: two symbols
// share a class iff their rows agree within kRowEqualityTol in total
// variation. Class ids are dense, ordered by smallest member index.
struct DependentPartMap {
  // One entry per x index; kNullClass for rows with zero probability.
  static constexpr int kNullClass = -1;
  std::vector<int> class_of;
  // One conditional distribution over y per class id.
  std::vector<std::vector<double>> class_conditional;

  int num_classes() const { return static_cast<int>(class_conditional.size()); }
};

// All entropies in bits.
struct EntropyReport {
  double h_x = 0.0;
  double h_y = 0.0;
  double h_x_given_y = 0.0;
  double h_y_given_x = 0.0;
  double i_xy = 0.0;
  double h_dep_xy_given_y = 0.0;  // H of the sender's row-class given Y
  double h_dep_yx_given_x = 0.0;  // H of the receiver's row-class given X
};

// Shannon entropy of a distribution in bits. Entries must be >= 0 (tiny
// negatives within kProbabilitySumTol are clamped) and sum to 1 within
// kProbabilitySumTol; otherwise throws ValidationError.
double shannon_entropy(std::span<const double> dist);

DependentPartMap dependent_part(const Primitive& p);

EntropyReport entropy_report(const Primitive& p);

// True iff the receiver's view determines the sender's row-class
// (H(class|Y) <= kEntropyTol). The mirrored criterion on the transposed
// primitive must agree; a disagreement throws ValidationError since the two
// are equivalent for any exactly-specified distribution.
bool is_trivial_primitive(const Primitive& p);

// One honest two-step sample of a trivial-structure run: the receiver draws
// the row-class and its conditional output, the sender draws a symbol inside
// the class. Returns (x label, y label). Deterministic for a given seed.
std::pair<std::string, std::string> classical_hbc_sample(const Primitive& p,
                                                         std::uint64_t seed);

}  // namespace embedgame

#endif  // EMBEDGAME_PRIMITIVE_HPP_
