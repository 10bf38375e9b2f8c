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

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <doctest.h>

#include "embedgame/errors.hpp"
#include "embedgame/linalg.hpp"
#include "embedgame/povm.hpp"
#include "embedgame/rng.hpp"
#include "embedgame/states.hpp"
#include "test_util.hpp"

using embedgame::Complex;
using embedgame::DensityOp;
using embedgame::Matrix;
using embedgame::MeasurementRecord;
using embedgame::Povm;
using embedgame::PureState;
using embedgame::Rng;
using embedgame::Vector;

namespace {

PureState bell_pair() {
  Vector amps = Vector::Zero(4);
  amps(0) = 1.0 / std::sqrt(2.0);
  amps(3) = 1.0 / std::sqrt(2.0);
  return PureState({2, 2}, std::move(amps));
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("pure state validation") {
  Vector bad(2);
  bad << 1.0, 1.0;  // norm sqrt(2)
  CHECK_THROWS_AS(PureState({2}, bad), embedgame::ValidationError);
  Vector ok(2);
  ok << 1.0, 0.0;
  CHECK_THROWS_AS(PureState({3}, ok), embedgame::ValidationError);
  CHECK_THROWS_AS(PureState({128}, Vector::Zero(128)),
                  embedgame::ValidationError);
  const PureState b = PureState::basis({2, 3}, 4);
  CHECK(b.dim() == 6);
  CHECK(b.amplitudes(4) == Complex(1.0, 0.0));
}

TEST_CASE("inner product conjugates the left argument") {
  Vector a(2), b(2);
  a << Complex(0.0, 1.0), 0.0;
  b << 1.0, 0.0;
  const PureState sa({2}, a), sb({2}, b);
  CHECK(std::abs(embedgame::inner(sa, sb) - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(std::abs(embedgame::overlap(sa, sb) - 1.0) <= 1e-15);
}

TEST_CASE("kron agrees between vectors and matrices") {
  Rng rng(0x5eed1001);
  const PureState a = testutil::random_pure_state(rng, 2);
  const PureState b = testutil::random_pure_state(rng, 3);
  const PureState ab = embedgame::tensor(a, b);
  CHECK(ab.dims == std::vector<int>{2, 3});
  const Vector direct = embedgame::kron(a.amplitudes, b.amplitudes);
  CHECK((ab.amplitudes - direct).norm() <= 1e-14);

  const Matrix pa = embedgame::projector(a).matrix;
  const Matrix pb = embedgame::projector(b).matrix;
  const Matrix pab = embedgame::kron(pa, pb);
  CHECK((pab - embedgame::projector(ab).matrix).norm() <= 1e-13);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  const DensityOp rho = embedgame::projector(bell_pair());
  const DensityOp left = embedgame::partial_trace(rho, {0});
  CHECK(left.dim() == 2);
  CHECK((left.matrix - 0.5 * Matrix::Identity(2, 2)).norm() <= 1e-14);
  CHECK(std::abs(embedgame::von_neumann_entropy(left) - 1.0) <= 1e-12);
  // Tracing out nothing returns the operator itself.
  const DensityOp whole = embedgame::partial_trace(rho, {0, 1});
  CHECK((whole.matrix - rho.matrix).norm() <= 1e-14);
}

TEST_CASE("partial trace is consistent across register splits") {
  Rng rng(0x5eed1002);
  const PureState a = testutil::random_pure_state(rng, 2);
  const PureState b = testutil::random_pure_state(rng, 2);
  const PureState c = testutil::random_pure_state(rng, 3);
  const PureState abc = embedgame::tensor(embedgame::tensor(a, b), c);
  REQUIRE(abc.dims == std::vector<int>{2, 2, 3});
  const DensityOp rho = embedgame::projector(abc);
  const DensityOp mid = embedgame::partial_trace(rho, {1});
  CHECK((mid.matrix - embedgame::projector(b).matrix).norm() <= 1e-13);
  const DensityOp outer = embedgame::partial_trace(rho, {0, 2});
  const Matrix expect = embedgame::kron(embedgame::projector(a).matrix,
                                        embedgame::projector(c).matrix);
  CHECK((outer.matrix - expect).norm() <= 1e-13);
}

TEST_CASE("von Neumann entropy of the biased pair ensemble") {
  // Equal mixture of two pure states with overlap 1/2 has eigenvalues
  // (1 +- 1/2)/2 = (3/4, 1/4).
  Vector v0(2), v1(2);
  v0 << std::sqrt(3.0) / 2.0, 0.5;
  v1 << std::sqrt(3.0) / 2.0, -0.5;
  const Matrix rho = 0.5 * (v0 * v0.adjoint() + v1 * v1.adjoint());
  const DensityOp op({2}, rho);
  const std::vector<double> eigs = {embedgame::hermitian_eigenvalues(rho)(0),
                                    embedgame::hermitian_eigenvalues(rho)(1)};
  CHECK(std::abs(eigs[0] - 0.25) <= 1e-12);
  CHECK(std::abs(eigs[1] - 0.75) <= 1e-12);
  CHECK(std::abs(embedgame::von_neumann_entropy(op) - 0.8112781244591328) <=
        1e-12);
}

TEST_CASE("purify choice yields the advertised marginals") {
  Rng rng(0x5eed1003);
  const PureState phi0 = testutil::random_pure_state(rng, 3);
  const PureState phi1 = testutil::random_pure_state(rng, 3);
  const double p = 0.3;
  const PureState psi = embedgame::purify_choice(p, phi0, phi1);
  REQUIRE(psi.dims == std::vector<int>{2, 3});
  const DensityOp choice = embedgame::partial_trace(embedgame::projector(psi), {0});
  CHECK(std::abs(std::real(choice.matrix(0, 0)) - p) <= 1e-12);
  CHECK(std::abs(std::real(choice.matrix(1, 1)) - (1.0 - p)) <= 1e-12);
  // The cross term carries the overlap of the two branches.
  const Complex cross = std::sqrt(p * (1.0 - p)) *
                        embedgame::inner(phi1, phi0);
  CHECK(std::abs(choice.matrix(0, 1) - cross) <= 1e-12);
  CHECK_THROWS_AS(embedgame::purify_choice(1.5, phi0, phi1),
                  embedgame::ValidationError);
}

TEST_CASE("gram_to_states reproduces the Gram matrix") {
  Rng rng(0x5eed1004);
  for (int trial = 0; trial < 20; ++trial) {
    // Build a PSD Gram matrix with unit diagonal from random states.
    const int n = 3;
    std::vector<PureState> src;
    for (int i = 0; i < n; ++i) src.push_back(testutil::random_pure_state(rng, 4));
    Matrix gram(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gram(i, j) = embedgame::inner(src[static_cast<std::size_t>(i)],
                                      src[static_cast<std::size_t>(j)]);
      }
    }
    const std::vector<PureState> out = embedgame::gram_to_states(gram);
    REQUIRE(out.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CHECK(std::abs(embedgame::inner(out[static_cast<std::size_t>(i)],
                                        out[static_cast<std::size_t>(j)]) -
                       gram(i, j)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("povm validation") {
  const Matrix id = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(Povm({2}, {id, id}, {"a", "b"}), embedgame::ValidationError);
  CHECK_THROWS_AS(Povm({2}, {0.5 * id, 0.5 * id}, {"a", "a"}),
                  embedgame::ValidationError);
  Matrix neg = id;
  neg(0, 0) = -0.5;
  neg(1, 1) = 1.5;
  Matrix comp = id - neg;
  CHECK_THROWS_AS(Povm({2}, {neg, comp}, {"a", "b"}),
                  embedgame::ValidationError);
  const Povm ok({2}, {0.25 * id, 0.75 * id}, {"lo", "hi"});
  CHECK(ok.size() == 2);
  CHECK(ok.dim() == 2);
}

TEST_CASE("computational povm statistics") {
  const Povm comp = Povm::computational({2, 2});
  const DensityOp rho = embedgame::projector(bell_pair());
  const std::vector<double> probs = embedgame::outcome_probabilities(rho, comp);
  REQUIRE(probs.size() == 4);
  CHECK(std::abs(probs[0] - 0.5) <= 1e-12);
  CHECK(std::abs(probs[1]) <= 1e-12);
  CHECK(std::abs(probs[2]) <= 1e-12);
  CHECK(std::abs(probs[3] - 0.5) <= 1e-12);
}

TEST_CASE("outcome probabilities sum to one for random povms") {
  Rng rng(0x5eed1005);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng.next_u64() % 3);
    const Povm m = testutil::random_povm(rng, dim, 3);
    const PureState s = testutil::random_pure_state(rng, dim);
    const std::vector<double> probs =
        embedgame::outcome_probabilities(embedgame::projector(s), m);
    double sum = 0.0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("measure applies the Lueders update") {
  // Measuring a Bell pair's first qubit collapses the second one with it.
  const DensityOp rho = embedgame::projector(bell_pair());
  const Matrix id2 = Matrix::Identity(2, 2);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Povm first({2, 2},
                   {embedgame::kron(p0, id2), embedgame::kron(p1, id2)},
                   {"0", "1"});
  std::map<std::size_t, int> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MeasurementRecord rec = embedgame::measure(rho, first, seed);
    CHECK(std::abs(rec.probability - 0.5) <= 1e-12);
    seen[rec.outcome_index]++;
    // Residual must be the matching product basis state.
    const int idx = rec.outcome_index == 0 ? 0 : 3;
    Matrix expect = Matrix::Zero(4, 4);
    expect(idx, idx) = 1.0;
    CHECK((rec.residual.matrix - expect).norm() <= 1e-12);
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
}

TEST_CASE("measure is deterministic in the seed") {
  Rng rng(0x5eed1006);
  const Povm m = testutil::random_povm(rng, 3, 3);
  const PureState s = testutil::random_pure_state(rng, 3);
  const DensityOp rho = embedgame::projector(s);
  const MeasurementRecord a = embedgame::measure(rho, m, 123456789);
  const MeasurementRecord b = embedgame::measure(rho, m, 123456789);
  CHECK(a.outcome_index == b.outcome_index);
  CHECK(a.probability == b.probability);
  CHECK((a.residual.matrix - b.residual.matrix).norm() == 0.0);
}

TEST_CASE("hermitian helpers") {
  Rng rng(0x5eed1007);
  Matrix g(3, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      g(r, c) = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
  }
  const Matrix psd = g * g.adjoint();
  CHECK(embedgame::hermiticity_defect(psd) <= 1e-13);
  const Matrix root = embedgame::hermitian_sqrt(psd);
  CHECK((root * root - psd).norm() <= 1e-10 * std::max(1.0, psd.norm()));
  const auto eigs = embedgame::hermitian_eigenvalues(psd);
  CHECK(eigs(0) >= -1e-12);
  CHECK(std::abs(embedgame::hermitian_operator_norm(psd) -
                 eigs(eigs.size() - 1)) <= 1e-12);
}

}  // TEST_SUITE
