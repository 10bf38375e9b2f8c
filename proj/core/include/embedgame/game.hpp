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
// The comparison game: a referee hands over two sealed registers that hold
// either twice the same state or the two different states of a pair with
// overlap tau, each of the four assignments with probability 1/4. The player
// answers "same", "different", or passes; a correct answer pays 1, a wrong
// one costs c, a pass is free. The best joint-measurement payoff at penalties
// large enough to force zero error is 1 - tau, while strategies that measure
// the registers separately are stuck near (1 - tau)^2.

#ifndef EMBEDGAME_GAME_HPP_
#define EMBEDGAME_GAME_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "embedgame/embedding.hpp"
#include "embedgame/povm.hpp"
#include "embedgame/states.hpp"

namespace embedgame {

// Referee answers. kInconclusive is the free pass.
enum class Answer { kSame, kDifferent, kInconclusive };

enum class StrategyKind {
  kCoherent,          // one POVM on both registers jointly
  kSeparableProduct,  // local unambiguous discriminators combined by table
  kSeparableGeneral,  // arbitrary local POVMs combined by table
};

// The four challenge states. `same[a]` is psi_a (x) psi_a; `different[0]` is
// psi_0 (x) psi_1 and `different[1]` the swap.
struct ComparisonStates {
  std::vector<PureState> same;
  std::vector<PureState> different;
};

// Local measurements on the two registers plus the answer announced for each
// outcome pair: answers[i][j] is the reply when the first register gave
// outcome i and the second gave outcome j.
struct FactoredStrategy {
  Povm first;
  Povm second;
  std::vector<std::vector<Answer>> answers;
};

struct ComparisonStrategy {
  StrategyKind kind = StrategyKind::kCoherent;
  // kCoherent: a POVM on the doubled register with outcomes "0" (same),
  // "1" (different), "?" (pass). Otherwise `factored` is set.
  std::optional<Povm> joint;
  std::optional<FactoredStrategy> factored;
};

// Outcome statistics of a strategy. Analytic evaluations report zero
// std_error and trials; Monte Carlo runs fill every field. All means are
// over the full trial count, with aborted sessions scoring zero, so a run at
// abort rate r estimates r times less payoff than the analytic challenge
// value. challenge_counts tallies the posed challenge cells (x0,x0), (x0,x1),
// (x1,x0), (x1,x1); a fair referee draws each with probability 1/4.
struct PayoffReport {
  double q_c = 0.0;         // conclusive probability
  double q_err = 0.0;       // error probability (wrong conclusive answers)
  double payoff = 0.0;      // q_c - q_err - c * q_err
  double abort_prob = 0.0;  // sessions discarded before a challenge was posed
  double std_error = 0.0;   // standard error of the payoff estimate
  std::uint64_t trials = 0;
  std::array<std::uint64_t, 4> challenge_counts{};
};

// Session parameters for an embedded protocol run: which two sender symbols
// are compared, their overlap (cross-checked against the embedding), the
// penalty, the number of parallel primitive invocations, and the Monte Carlo
// budget.
struct GameConfig {
  std::string x0;
  std::string x1;
  double tau = 0.0;
  double c = 1.0;
  int copies = 4;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
};

struct SeparableSearchResult {
  PayoffReport best;
  ComparisonStrategy strategy;
  double tau = 0.0;
  double c = 0.0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
};

// Certificate that, for overlap tau, some finite penalty c_star separates the
// coherent payoff 1 - tau from everything a separate-register player can
// reach: every branch bound stays below (1 - tau) - f_tau.
struct GapCertificate {
  double tau = 0.0;
  double k = 0.0;        // 20 / (9 tau (1 - tau))
  double f_tau = 0.0;    // tau (1 - tau) / 10
  double p_max = 0.0;    // 1 - tau
  double c_star = 0.0;   // certified penalty (0 when not verified)
  double b0 = 0.0;       // bound for rarely-conclusive strategies
  double b1 = 0.0;       // bound for strategies with error below q_lower
  double q_lower = 0.0;  // 1 / (2 k (c_star + 1))
  double q_upper = 0.0;  // tau^2 (1 - tau) / 256
  std::vector<double> b2_q;       // mid-range error grid
  std::vector<double> b2_values;  // bound along the grid
  bool verified = false;
};

// Number of worker threads Monte Carlo loops may use. Reads EMBEDGAME_THREADS
// (clamped to [1, 64]); defaults to the hardware concurrency capped at 8.
// Results are bitwise independent of this value.
int thread_budget();

// Challenge states for labels x0 != x1 of the embedding's sender alphabet.
ComparisonStates comparison_states(const RegularEmbedding& e,
                                   const std::string& x0,
                                   const std::string& x1);

// payoff = q_c - (1 + c) q_err, validating 0 <= q_err <= q_c <= 1 and c > 0.
double expected_payoff(double q_c, double q_err, double c);

// Payoff of a player who discriminates each register separately with error
// rates q0 and q1, always answers, and announces the XOR of the two guesses:
// 1 - (c + 1) (q0 + q1 - 2 q0 q1).
double pairwise_payoff(double q0, double q1, double c);

// Optimal joint strategy at penalties large enough that errors never pay:
// zero error, conclusive probability 1 - tau on every challenge. Built by
// solving the underlying concave program to ~1e-9; throws ConvergenceError if
// the solver stalls further than 1e-4 from the optimum.
ComparisonStrategy coherent_optimal_comparison(const PureState& psi0,
                                               const PureState& psi1);

// Local unambiguous discriminators on each register, answers combined by XOR
// when both are conclusive; payoff (1 - tau)^2 with zero error.
ComparisonStrategy separable_product_strategy(const PureState& psi0,
                                              const PureState& psi1);

// Always answers "same" regardless of the registers: payoff (1 - c) / 2.
ComparisonStrategy blind_guess_strategy(const std::vector<int>& dims);

// Exact payoff statistics of a strategy against the uniform challenge mix.
PayoffReport evaluate_strategy(const ComparisonStrategy& s,
                               const ComparisonStates& states, double c);

// Replaces the answer table of a factored strategy by the cell-wise optimal
// one for the given single-register challenge pair and penalty: each outcome
// pair answers whatever maximizes its own expected contribution (possibly
// passing).
void optimize_answer_table(FactoredStrategy& s, const PureState& psi0,
                           const PureState& psi1, double c);

// Monte Carlo run of the embedded session: per trial, `copies` sender symbols
// are drawn from the embedding's input distribution, a challenge pair is
// posed among the registers carrying x0/x1 (abort when there are not two of
// each), and the strategy is scored on it. Bitwise deterministic for a fixed
// config regardless of thread count.
PayoffReport simulate_protocol(const RegularEmbedding& e, const GameConfig& cfg,
                               const ComparisonStrategy& s);

// Randomized hill-climbing search over factored strategies with 2-4 outcome
// local POVMs and cell-wise optimal answer tables, on the canonical
// two-dimensional states with overlap tau at penalty c. `budget` counts
// evaluated candidates; deterministic for a fixed seed.
SeparableSearchResult separable_search(double tau, double c,
                                       std::uint64_t budget,
                                       std::uint64_t seed);

// Runs the finite-penalty separation argument for tau in [0.01, 0.99]:
// scans a penalty schedule until all branch bounds sit below p_max - f_tau.
GapCertificate gap_certificate(double tau);

}  // namespace embedgame

#endif  // EMBEDGAME_GAME_HPP_
