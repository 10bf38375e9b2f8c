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

#ifndef EMBEDGAME_EMBEDDING_HPP_
#define EMBEDGAME_EMBEDDING_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embedgame/primitive.hpp"
#include "embedgame/states.hpp"

namespace embedgame {

// Entropy threshold below which an embedding counts as trivial, in bits.
inline constexpr double kEmbeddingTrivialTol = 1e-6;

// The purified sender-weighted protocol state
//   sum_x sqrt(alice_weights[x]) |x> (x) |bob_states[x]>
// for a given primitive. `phases[x][y]` records the free phase applied to the
// computational component y of bob_states[x] at build time (informational for
// states constructed elsewhere).
struct RegularEmbedding {
  Primitive primitive;
  int bob_dim;
  std::vector<double> alice_weights;
  std::vector<PureState> bob_states;
  std::vector<std::vector<double>> phases;

  // Validates: one weight and one bob state (of dimension bob_dim) per sender
  // symbol, weights >= 0 summing to 1 within kProbabilitySumTol, and a phase
  // matrix of shape |X| x |Y| (empty means all-zero).
  RegularEmbedding(Primitive primitive, int bob_dim, std::vector<double> alice_weights,
                   std::vector<PureState> bob_states, std::vector<std::vector<double>> phases);

  // The joint pure state on registers {|X|, bob_dim}.
  PureState joint_state() const;
};

enum class EmbeddingVerdict { kTrivial, kNonTrivial };

struct EmbeddingClassification {
  double s_dep_xy_given_b = 0.0;  // S(row-class of X | Bob's register), bits
  double s_dep_yx_given_a = 0.0;  // mirrored on the transposed primitive
  EmbeddingVerdict verdict = EmbeddingVerdict::kNonTrivial;
};

// Mixture of regular embeddings with amplitude weights (sum of squares 1):
// the Schmidt-block normal form of a general correct protocol state.
struct CanonicalEmbedding {
  std::vector<double> weights;
  std::vector<RegularEmbedding> regular_parts;

  CanonicalEmbedding(std::vector<double> weights, std::vector<RegularEmbedding> regular_parts);
};

struct ComparisonPair {
  std::size_t x0 = 0;
  std::size_t x1 = 0;
  std::string x0_label;
  std::string x1_label;
  double tau = 0.0;
};

// Builds the canonical regular embedding with receiver states
// psi_x = sum_y sqrt(P(y|x)) e^{i phases[x][y]} |y>. Requires full sender
// support (P_X(x) > 0 for all x); phases empty means all zeros.
RegularEmbedding build_regular_embedding(const Primitive& p,
                                         std::vector<std::vector<double>> phases = {});

// Whether a protocol state reproduces the primitive's correlation exactly:
// both S(X ; Y B') and S(X A' ; Y) — with X and Y read out in the
// computational basis, primed registers kept quantum — must equal the
// primitive's I(X;Y) within kEmbeddingTrivialTol.
bool check_correct(const RegularEmbedding& e, const Primitive& p);

// Same check for an explicit four-register state with layout
// {sender, sender ancilla, receiver, receiver ancilla}; the sender register
// must have dimension |X| and the receiver register |Y|.
bool check_correct(const PureState& state, const Primitive& p);

// Conditional entropy of each party's row-class given the other party's
// quantum register; trivial iff either side is <= kEmbeddingTrivialTol.
// Requires bob_dim == |Y| so receiver components align with the y alphabet.
EmbeddingClassification classify_embedding(const RegularEmbedding& e);

// The sender-symbol pair maximizing tau(1-tau) over pairs with positive
// weights and 1e-6 < tau < 1 - 1e-6; ties resolved toward the smallest
// lexicographic index pair. Throws NotFoundError when no pair qualifies.
ComparisonPair find_comparison_pair(const RegularEmbedding& e);

// Samples block k proportionally to weights[k]^2 and returns it with its
// regular part.
std::pair<std::size_t, RegularEmbedding> collapse_to_regular(const CanonicalEmbedding& c,
                                                             std::uint64_t seed);

}  // namespace embedgame

#endif  // EMBEDGAME_EMBEDDING_HPP_
