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
//
// Trusted-box sessions: each of `copies` parallel primitive invocations holds
// the embedding's joint state, and the parties may only measure their own
// register of a single copy at a time. Adaptive decision-tree programs model
// a dishonest receiver who schedules local measurements across two challenged
// copies before answering the comparison question.

#ifndef EMBEDGAME_IDEAL_HPP_
#define EMBEDGAME_IDEAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "embedgame/embedding.hpp"
#include "embedgame/game.hpp"
#include "embedgame/povm.hpp"
#include "embedgame/states.hpp"

namespace embedgame {

enum class Party { kAlice, kBob };

struct QueryRecord {
  Party party = Party::kAlice;
  int copy = 0;
  std::string povm_id;
  std::size_t outcome_index = 0;
  std::string outcome_label;
  double probability = 0.0;
};

// One multi-copy session of the trusted box. All randomness flows from the
// seed, so a session replays identically.
class IdealSession {
 public:
  // `copies` fresh invocations, each in the embedding's joint state.
  IdealSession(RegularEmbedding e, int copies, std::uint64_t seed);

  // The two-copy session left behind after the sender's registers were read
  // out as symbols alpha and beta (indices into the sender alphabet, which
  // must carry positive weight). The readouts appear in the log.
  static IdealSession challenged(RegularEmbedding e, std::size_t alpha,
                                 std::size_t beta, std::uint64_t seed);

  int copies() const { return static_cast<int>(states_.size()); }
  const RegularEmbedding& embedding() const { return embedding_; }
  const DensityOp& copy_state(int copy) const;
  const std::vector<QueryRecord>& log() const { return log_; }

  // Computational-basis readout of the party's own register, labeled by the
  // primitive's alphabet where the dimensions line up.
  QueryRecord honest_query(Party party, int copy);

  // Arbitrary measurement of the party's own register of one copy. The POVM
  // must act on exactly that register's dimension; anything else throws
  // LocalityViolation.
  QueryRecord query(Party party, int copy, const Povm& m,
                    const std::string& povm_id);

 private:
  RegularEmbedding embedding_;
  std::vector<DensityOp> states_;
  std::vector<QueryRecord> log_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
};

// A decision tree of local measurements on the two challenged copies. Node 0
// is the root; next[k] is either a child index (strictly larger, so the walk
// always terminates) or one of the leaf codes.
struct ProgramNode {
  int copy = 0;
  Povm povm;
  std::vector<int> next;
};

struct AdaptiveProgram {
  static constexpr int kLeafSame = -1;
  static constexpr int kLeafDifferent = -2;
  static constexpr int kLeafPass = -3;
  std::vector<ProgramNode> nodes;
};

inline constexpr int kMaxProgramDepth = 16;

// Validates structure: non-empty, every POVM on `register_dim`, forward
// edges, outcome counts matching, depth at most kMaxProgramDepth.
void validate_program(const AdaptiveProgram& prog, int register_dim);

// Walks the program on a (typically challenged) session, measuring Bob's
// register of the node's copy at every step.
Answer run_program(IdealSession& session, const AdaptiveProgram& prog);

// Exact statistics of the program against uniform challenges over the pair
// (psi0, psi1) at penalty c.
PayoffReport evaluate_program(const AdaptiveProgram& prog,
                              const PureState& psi0, const PureState& psi1,
                              double c);

// Monte Carlo of the program against uniformly challenged sessions on the
// embedding's (x0, x1) pair. Bitwise deterministic for a fixed seed
// regardless of thread count.
PayoffReport run_restricted_adversary(const RegularEmbedding& e,
                                      const std::string& x0,
                                      const std::string& x1,
                                      const AdaptiveProgram& prog, double c,
                                      std::uint64_t trials,
                                      std::uint64_t seed);

// Random decision tree with 2-3 outcome local POVMs whose leaves answer
// cell-wise optimally for the challenge pair at penalty c; an adversary
// generator for stress tests. Deterministic for a fixed seed.
AdaptiveProgram random_adaptive_program(const PureState& psi0,
                                        const PureState& psi1, double c,
                                        int max_depth, std::uint64_t seed);

}  // namespace embedgame

#endif  // EMBEDGAME_IDEAL_HPP_
