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

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "embedgame/embedding.hpp"
#include "embedgame/errors.hpp"
#include "embedgame/game.hpp"
#include "embedgame/primitive.hpp"
#include "embedgame/rng.hpp"
#include "embedgame/states.hpp"
#include "test_util.hpp"

using embedgame::Answer;
using embedgame::ComparisonStates;
using embedgame::ComparisonStrategy;
using embedgame::FactoredStrategy;
using embedgame::GameConfig;
using embedgame::GapCertificate;
using embedgame::PayoffReport;
using embedgame::Povm;
using embedgame::Primitive;
using embedgame::PureState;
using embedgame::RegularEmbedding;
using embedgame::Rng;
using embedgame::SeparableSearchResult;
using embedgame::StrategyKind;

namespace {

// Qubit pair with overlap tau: (1, 0) against (tau, sqrt(1 - tau^2)).
std::pair<PureState, PureState> qubit_pair(double tau) {
  embedgame::Vector a = embedgame::Vector::Zero(2);
  a(0) = 1.0;
  embedgame::Vector b(2);
  b << tau, std::sqrt(1.0 - tau * tau);
  return {PureState({2}, a), PureState({2}, b)};
}

ComparisonStates states_of(const PureState& psi0, const PureState& psi1) {
  ComparisonStates st;
  st.same = {embedgame::tensor(psi0, psi0), embedgame::tensor(psi1, psi1)};
  st.different = {embedgame::tensor(psi0, psi1),
                  embedgame::tensor(psi1, psi0)};
  return st;
}

RegularEmbedding signed_biased_embedding() {
  const Primitive p({"0", "1"}, {"0", "1"}, {{0.375, 0.125}, {0.375, 0.125}});
  return embedgame::build_regular_embedding(
      p, {{0.0, 0.0}, {0.0, std::numbers::pi}});
}

// Rank-1 projective qubit measurement {|u><u|, 1 - |u><u|}.
Povm projective_qubit(Rng& rng) {
  const PureState u = testutil::random_pure_state(rng, 2);
  const embedgame::Matrix p = embedgame::projector(u).matrix;
  return Povm({2}, {p, embedgame::Matrix(embedgame::Matrix::Identity(2, 2) - p)},
              {"0", "1"});
}

double misidentification_rate(const Povm& m, const PureState& psi0,
                              const PureState& psi1) {
  const std::vector<double> p0 =
      embedgame::outcome_probabilities(embedgame::projector(psi0), m);
  const std::vector<double> p1 =
      embedgame::outcome_probabilities(embedgame::projector(psi1), m);
  return 0.5 * (p0[1] + p1[0]);
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("payoff formulas at frozen points") {
  CHECK(std::abs(embedgame::expected_payoff(0.5, 0.1, 2.0) - 0.2) <= 1e-15);
  CHECK(embedgame::expected_payoff(1.0, 0.0, 100.0) == 1.0);
  CHECK_THROWS_AS(embedgame::expected_payoff(0.3, 0.4, 1.0),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(embedgame::expected_payoff(1.2, 0.0, 1.0),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(embedgame::expected_payoff(0.5, 0.1, 0.0),
                  embedgame::ValidationError);

  CHECK(std::abs(embedgame::pairwise_payoff(0.01, 0.02, 9.0) - 0.704) <=
        1e-15);
  CHECK(embedgame::pairwise_payoff(0.0, 0.0, 5.0) == 1.0);
  CHECK(std::abs(embedgame::pairwise_payoff(0.2, 0.05, 3.0) -
                 embedgame::pairwise_payoff(0.05, 0.2, 3.0)) <= 1e-15);
}

TEST_CASE("challenge states of an embedding") {
  const RegularEmbedding e = signed_biased_embedding();
  const ComparisonStates st = embedgame::comparison_states(e, "0", "1");
  REQUIRE(st.same.size() == 2);
  REQUIRE(st.different.size() == 2);
  const PureState expect = embedgame::tensor(e.bob_states[0], e.bob_states[1]);
  CHECK((st.different[0].amplitudes - expect.amplitudes).norm() <= 1e-12);
  CHECK(st.same[0].dims == std::vector<int>{2, 2});

  CHECK_THROWS_AS(embedgame::comparison_states(e, "0", "0"),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(embedgame::comparison_states(e, "0", "nope"),
                  embedgame::ValidationError);
}

TEST_CASE("coherent strategy reaches the joint optimum") {
  for (double tau : {0.1, 0.5, 0.9, 0.99}) {
    const auto [psi0, psi1] = qubit_pair(tau);
    const ComparisonStrategy s =
        embedgame::coherent_optimal_comparison(psi0, psi1);
    CHECK(s.kind == StrategyKind::kCoherent);
    const PayoffReport rep =
        embedgame::evaluate_strategy(s, states_of(psi0, psi1), 2.0);
    CHECK(std::abs(rep.q_c - (1.0 - tau)) <= 1e-6);
    CHECK(rep.q_err <= 1e-9);
    CHECK(std::abs(rep.payoff - (1.0 - tau)) <= 2e-6);
    CHECK(rep.trials == 0);
    CHECK(rep.std_error == 0.0);
  }
}

TEST_CASE("product strategy squares the conclusive rate") {
  for (double tau : {0.2, 0.5, 0.8}) {
    const auto [psi0, psi1] = qubit_pair(tau);
    const ComparisonStrategy s =
        embedgame::separable_product_strategy(psi0, psi1);
    const PayoffReport rep =
        embedgame::evaluate_strategy(s, states_of(psi0, psi1), 5.0);
    CHECK(std::abs(rep.q_c - (1.0 - tau) * (1.0 - tau)) <= 1e-10);
    CHECK(rep.q_err <= 1e-10);
    CHECK(std::abs(rep.payoff - (1.0 - tau) * (1.0 - tau)) <= 1e-9);
  }
}

TEST_CASE("blind guess pays (1 - c) / 2") {
  const auto [psi0, psi1] = qubit_pair(0.5);
  const ComparisonStrategy s = embedgame::blind_guess_strategy({2, 2});
  const PayoffReport rep =
      embedgame::evaluate_strategy(s, states_of(psi0, psi1), 3.0);
  CHECK(std::abs(rep.q_c - 1.0) <= 1e-12);
  CHECK(std::abs(rep.q_err - 0.5) <= 1e-12);
  CHECK(std::abs(rep.payoff - (1.0 - 3.0) / 2.0) <= 1e-12);
}

TEST_CASE("factored always-answer strategies obey the pairwise formula") {
  Rng rng(0x5eed4001);
  for (int trial = 0; trial < 50; ++trial) {
    const double tau = 0.1 + 0.8 * rng.next_double();
    const double c = 0.5 + 4.0 * rng.next_double();
    const auto [psi0, psi1] = qubit_pair(tau);

    FactoredStrategy f{projective_qubit(rng), projective_qubit(rng),
                       {{Answer::kSame, Answer::kDifferent},
                        {Answer::kDifferent, Answer::kSame}}};
    ComparisonStrategy s;
    s.kind = StrategyKind::kSeparableGeneral;
    s.factored = f;

    const double q0 = misidentification_rate(f.first, psi0, psi1);
    const double q1 = misidentification_rate(f.second, psi0, psi1);
    const PayoffReport rep =
        embedgame::evaluate_strategy(s, states_of(psi0, psi1), c);
    CHECK(std::abs(rep.q_c - 1.0) <= 1e-12);
    CHECK(std::abs(rep.payoff - embedgame::pairwise_payoff(q0, q1, c)) <=
          1e-12);
  }
}

TEST_CASE("answer-table optimization never hurts") {
  Rng rng(0x5eed4002);
  for (int trial = 0; trial < 30; ++trial) {
    const double tau = 0.1 + 0.8 * rng.next_double();
    const double c = 0.5 + 9.0 * rng.next_double();
    const auto [psi0, psi1] = qubit_pair(tau);
    const ComparisonStates st = states_of(psi0, psi1);

    FactoredStrategy f{testutil::random_povm(rng, 2, 3),
                       testutil::random_povm(rng, 2, 2),
                       {}};
    f.answers.assign(3, std::vector<Answer>(2));
    for (auto& row : f.answers) {
      for (Answer& a : row) {
        const auto pick =  (rng.next_u64() % 3);
        a = pick == 0 ? Answer::kSame
                      : (pick == 1 ? Answer::kDifferent
                                   : Answer::kInconclusive);
      }
    }
    ComparisonStrategy s;
    s.kind = StrategyKind::kSeparableGeneral;
    s.factored = f;
    const double before = embedgame::evaluate_strategy(s, st, c).payoff;

    embedgame::optimize_answer_table(*s.factored, psi0, psi1, c);
    const double after = embedgame::evaluate_strategy(s, st, c).payoff;
    CHECK(after >= before - 1e-12);
    CHECK(after >= -1e-12);  // passing everywhere is always available
  }
}

TEST_CASE("separation certificate at one half") {
  const GapCertificate cert = embedgame::gap_certificate(0.5);
  CHECK(cert.verified);
  CHECK(std::abs(cert.k - 80.0 / 9.0) <= 1e-12);
  CHECK(std::abs(cert.f_tau - 0.025) <= 1e-15);
  CHECK(std::abs(cert.p_max - 0.5) <= 1e-15);
  CHECK(std::abs(cert.c_star - 2056.0) <= 1e-9);
  CHECK(std::abs(cert.b0 - 0.44375) <= 1e-12);
  CHECK(std::abs(cert.b1 - 0.475) <= 1e-12);
  CHECK(std::abs(cert.q_lower - 2.7345649003403014e-05) <= 1e-15);
  CHECK(std::abs(cert.q_upper - 0.00048828125) <= 1e-15);
  REQUIRE(cert.b2_q.size() == cert.b2_values.size());
  CHECK(cert.b2_q.size() >= 2);

  const double budget = cert.p_max - cert.f_tau + 1e-12;
  CHECK(cert.b0 <= budget);
  CHECK(cert.b1 <= budget);
  for (double b : cert.b2_values) CHECK(b <= budget);
}

TEST_CASE("separation certificate across the overlap grid") {
  for (int i = 1; i <= 9; ++i) {
    const double tau = 0.1 * i;
    const GapCertificate cert = embedgame::gap_certificate(tau);
    CHECK(cert.verified);
    CHECK(std::abs(cert.k - 20.0 / (9.0 * tau * (1.0 - tau))) <= 1e-9);
    const double budget = cert.p_max - cert.f_tau + 1e-12;
    CHECK(cert.b0 <= budget);
    CHECK(cert.b1 <= budget);
    for (double b : cert.b2_values) CHECK(b <= budget);
  }
  CHECK(std::abs(embedgame::gap_certificate(0.1).c_star - 29606.4) <= 1e-9);
  CHECK(std::abs(embedgame::gap_certificate(0.9).c_star - 3289.6) <= 1e-9);

  CHECK_THROWS_AS(embedgame::gap_certificate(0.005),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(embedgame::gap_certificate(0.995),
                  embedgame::ValidationError);
}

TEST_CASE("separable search floor and ceiling") {
  // The first candidate is the exact local unambiguous pair.
  const SeparableSearchResult one = embedgame::separable_search(0.5, 2056.0, 1, 7);
  CHECK(one.best.payoff >= 0.25 - 1e-12);
  CHECK(one.budget == 1);
  CHECK(one.seed == 7);
  CHECK(std::abs(one.tau - 0.5) <= 1e-15);

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const SeparableSearchResult res =
        embedgame::separable_search(0.5, 2056.0, 2000, seed);
    CHECK(res.best.payoff >= 0.25 - 1e-12);
    CHECK(res.best.payoff <= 0.475 + 1e-9);
  }

  // With a feeble penalty, always answering beats passing.
  const SeparableSearchResult cheap =
      embedgame::separable_search(0.5, 0.01, 2000, 11);
  CHECK(cheap.best.payoff >= 0.49);

  CHECK_THROWS_AS(embedgame::separable_search(0.0, 1.0, 10, 0),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(embedgame::separable_search(1.0, 1.0, 10, 0),
                  embedgame::ValidationError);
}

TEST_CASE("search results are reproducible for a fixed seed") {
  const SeparableSearchResult a = embedgame::separable_search(0.3, 50.0, 500, 42);
  const SeparableSearchResult b = embedgame::separable_search(0.3, 50.0, 500, 42);
  CHECK(a.best.payoff == b.best.payoff);
  CHECK(a.best.q_c == b.best.q_c);
  CHECK(a.best.q_err == b.best.q_err);
}

TEST_CASE("protocol simulation validates its configuration") {
  const RegularEmbedding e = signed_biased_embedding();
  const ComparisonStrategy s = embedgame::blind_guess_strategy({2, 2});
  GameConfig cfg;
  cfg.x0 = "0";
  cfg.x1 = "1";
  cfg.tau = 0.5;
  cfg.c = 2.0;
  cfg.copies = 8;
  cfg.trials = 100;

  GameConfig bad = cfg;
  bad.copies = 3;
  CHECK_THROWS_AS(embedgame::simulate_protocol(e, bad, s),
                  embedgame::ValidationError);
  bad = cfg;
  bad.trials = 0;
  CHECK_THROWS_AS(embedgame::simulate_protocol(e, bad, s),
                  embedgame::ValidationError);
  bad = cfg;
  bad.c = 0.0;
  CHECK_THROWS_AS(embedgame::simulate_protocol(e, bad, s),
                  embedgame::ValidationError);
  bad = cfg;
  bad.x1 = "0";
  CHECK_THROWS_AS(embedgame::simulate_protocol(e, bad, s),
                  embedgame::ValidationError);
  bad = cfg;
  bad.tau = 0.3;  // embedding overlap is 0.5
  CHECK_THROWS_AS(embedgame::simulate_protocol(e, bad, s),
                  embedgame::ValidationError);
}

TEST_CASE("abort rate of a scarce alphabet at four copies") {
  // 1-2 OT at m = 4: a challenge needs two registers of each compared symbol,
  // which among four uniform four-symbol draws happens with probability
  // 6 / 256.
  const Primitive ot({"00", "01", "10", "11"}, {"00", "01", "10", "11"},
                     {{0.125, 0, 0.125, 0},
                      {0.125, 0, 0, 0.125},
                      {0, 0.125, 0.125, 0},
                      {0, 0.125, 0, 0.125}});
  const RegularEmbedding e = embedgame::build_regular_embedding(ot);
  GameConfig cfg;
  cfg.x0 = "00";
  cfg.x1 = "01";  // rows share one support point, overlap 1/2
  cfg.tau = 0.5;
  cfg.c = 2.0;
  cfg.copies = 4;
  cfg.trials = 20000;
  cfg.seed = 5;
  const ComparisonStrategy s = embedgame::blind_guess_strategy({4, 4});
  const PayoffReport rep = embedgame::simulate_protocol(e, cfg, s);

  const double expect = 1.0 - 6.0 / 256.0;
  const double sigma =
      std::sqrt(expect * (1.0 - expect) / static_cast<double>(cfg.trials));
  CHECK(std::abs(rep.abort_prob - expect) <= 4.0 * sigma);
  CHECK(rep.trials == cfg.trials);
}

TEST_CASE("simulation tracks the analytic challenge payoff") {
  const RegularEmbedding e = signed_biased_embedding();
  const ComparisonStates st = embedgame::comparison_states(e, "0", "1");
  GameConfig cfg;
  cfg.x0 = "0";
  cfg.x1 = "1";
  cfg.tau = 0.5;
  cfg.c = 2.0;
  cfg.copies = 64;
  cfg.trials = 20000;
  cfg.seed = 17;

  const auto [psi0, psi1] = std::pair(e.bob_states[0], e.bob_states[1]);
  const std::vector<ComparisonStrategy> strategies = {
      embedgame::coherent_optimal_comparison(psi0, psi1),
      embedgame::separable_product_strategy(psi0, psi1),
      embedgame::blind_guess_strategy({2, 2}),
  };
  for (const ComparisonStrategy& s : strategies) {
    const double analytic = embedgame::evaluate_strategy(s, st, cfg.c).payoff;
    const PayoffReport rep = embedgame::simulate_protocol(e, cfg, s);
    const double target = analytic * (1.0 - rep.abort_prob);
    CHECK(std::abs(rep.payoff - target) <=
          4.0 * rep.std_error + 1e-12);

    // The referee posed each challenge cell with probability 1/4.
    const double posed = static_cast<double>(cfg.trials) * (1.0 - rep.abort_prob);
    const std::vector<double> counts(rep.challenge_counts.begin(),
                                     rep.challenge_counts.end());
    const std::vector<double> expected(4, posed / 4.0);
    CHECK(testutil::chi_square_stat(counts, expected) <=
          testutil::chi_square_99(3));
  }
}

TEST_CASE("simulation is bitwise deterministic and thread independent") {
  const RegularEmbedding e = signed_biased_embedding();
  GameConfig cfg;
  cfg.x0 = "0";
  cfg.x1 = "1";
  cfg.tau = 0.5;
  cfg.c = 2.0;
  cfg.copies = 8;
  cfg.trials = 6000;
  cfg.seed = 23;
  const ComparisonStrategy s = embedgame::separable_product_strategy(
      e.bob_states[0], e.bob_states[1]);

  ::setenv("EMBEDGAME_THREADS", "1", 1);
  CHECK(embedgame::thread_budget() == 1);
  const PayoffReport serial = embedgame::simulate_protocol(e, cfg, s);
  ::setenv("EMBEDGAME_THREADS", "7", 1);
  CHECK(embedgame::thread_budget() == 7);
  const PayoffReport parallel = embedgame::simulate_protocol(e, cfg, s);
  ::unsetenv("EMBEDGAME_THREADS");

  CHECK(serial.payoff == parallel.payoff);
  CHECK(serial.q_c == parallel.q_c);
  CHECK(serial.q_err == parallel.q_err);
  CHECK(serial.abort_prob == parallel.abort_prob);
  CHECK(serial.std_error == parallel.std_error);
  CHECK(serial.challenge_counts == parallel.challenge_counts);

  const PayoffReport again = embedgame::simulate_protocol(e, cfg, s);
  CHECK(again.payoff == serial.payoff);
  CHECK(again.challenge_counts == serial.challenge_counts);
}

TEST_CASE("thread budget honors its environment override") {
  ::setenv("EMBEDGAME_THREADS", "3", 1);
  CHECK(embedgame::thread_budget() == 3);
  ::setenv("EMBEDGAME_THREADS", "0", 1);
  CHECK(embedgame::thread_budget() == 1);
  ::setenv("EMBEDGAME_THREADS", "999", 1);
  CHECK(embedgame::thread_budget() == 64);
  ::unsetenv("EMBEDGAME_THREADS");
  const int fallback = embedgame::thread_budget();
  CHECK(fallback >= 1);
  CHECK(fallback <= 8);
}

}  // TEST_SUITE
