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
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "embedgame/errors.hpp"
#include "embedgame/primitive.hpp"
#include "embedgame/rng.hpp"
#include "test_util.hpp"

using embedgame::DependentPartMap;
using embedgame::EntropyReport;
using embedgame::Primitive;
using embedgame::Rng;

namespace {

// 1-out-of-2 oblivious transfer: the sender holds two bits, the receiver
// learns the one it chose. Sender symbol "b0b1", receiver symbol "cv".
Primitive one_of_two_ot() {
  return Primitive({"00", "01", "10", "11"}, {"00", "01", "10", "11"},
                   {{0.125, 0, 0.125, 0},
                    {0.125, 0, 0, 0.125},
                    {0, 0.125, 0.125, 0},
                    {0, 0.125, 0, 0.125}});
}

Primitive shared_coin() {
  return Primitive({"h", "t"}, {"h", "t"}, {{0.5, 0}, {0, 0.5}});
}

// Sender bit independent of a biased receiver bit; both rows are (3/8, 1/8).
Primitive independent_biased() {
  return Primitive({"0", "1"}, {"0", "1"},
                   {{0.375, 0.125}, {0.375, 0.125}});
}

}  // namespace

TEST_SUITE("primitive") {

TEST_CASE("shannon entropy of frozen distributions") {
  const std::array<double, 4> skew = {0.375, 0.375, 0.125, 0.125};
  CHECK(std::abs(embedgame::shannon_entropy(skew) - 1.811278124459133) <=
        1e-12);
  const std::array<double, 2> biased = {0.75, 0.25};
  CHECK(std::abs(embedgame::shannon_entropy(biased) - 0.8112781244591328) <=
        1e-12);
  const std::array<double, 4> uniform = {0.25, 0.25, 0.25, 0.25};
  CHECK(std::abs(embedgame::shannon_entropy(uniform) - 2.0) <= 1e-12);
  const std::array<double, 3> point = {0.0, 1.0, 0.0};
  CHECK(embedgame::shannon_entropy(point) == 0.0);
}

TEST_CASE("construction rejects malformed tables") {
  CHECK_THROWS_AS(Primitive({"a", "a"}, {"y"}, {{0.5}, {0.5}}),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(Primitive({"a"}, {"y", "z"}, {{0.7, 0.2}}),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(Primitive({"a"}, {"y", "z"}, {{1.2, -0.2}}),
                  embedgame::ValidationError);
  CHECK_THROWS_AS(Primitive({}, {}, {}), embedgame::ValidationError);
  CHECK_THROWS_AS(Primitive({"a", "b"}, {"y"}, {{1.0}}),
                  embedgame::ValidationError);
}

TEST_CASE("marginals and conditionals of 1-2 OT") {
  const Primitive p = one_of_two_ot();
  for (double w : p.x_marginal()) CHECK(std::abs(w - 0.25) <= 1e-15);
  for (double w : p.y_marginal()) CHECK(std::abs(w - 0.25) <= 1e-15);
  const std::vector<double> row = p.row_conditional(0);
  CHECK(std::abs(row[0] - 0.5) <= 1e-15);
  CHECK(row[1] == 0.0);
  CHECK(std::abs(row[2] - 0.5) <= 1e-15);
  CHECK(p.x_index("10") == 2);
  CHECK_THROWS_AS(p.x_index("99"), embedgame::ValidationError);
}

TEST_CASE("entropy report of 1-2 OT") {
  const EntropyReport rep = embedgame::entropy_report(one_of_two_ot());
  CHECK(std::abs(rep.h_x - 2.0) <= 1e-12);
  CHECK(std::abs(rep.h_y - 2.0) <= 1e-12);
  CHECK(std::abs(rep.h_x_given_y - 1.0) <= 1e-12);
  CHECK(std::abs(rep.h_y_given_x - 1.0) <= 1e-12);
  CHECK(std::abs(rep.i_xy - 1.0) <= 1e-12);
  CHECK(std::abs(rep.h_dep_xy_given_y - 1.0) <= 1e-12);
  CHECK(std::abs(rep.h_dep_yx_given_x - 1.0) <= 1e-12);
}

TEST_CASE("dependent part groups equal rows") {
  const Primitive ind = independent_biased();
  const DependentPartMap dep = embedgame::dependent_part(ind);
  CHECK(dep.num_classes() == 1);
  CHECK(dep.class_of[0] == dep.class_of[1]);

  const DependentPartMap ot = embedgame::dependent_part(one_of_two_ot());
  CHECK(ot.num_classes() == 4);

  // Rows that differ by less than the grouping tolerance merge.
  const double eps = 1e-11;
  const Primitive near({"a", "b"}, {"y", "z"},
                       {{0.25 + eps, 0.25 - eps}, {0.25 - eps, 0.25 + eps}});
  CHECK(embedgame::dependent_part(near).num_classes() == 1);
}

TEST_CASE("class conditionals are the shared rows") {
  const Primitive p = independent_biased();
  const DependentPartMap dep = embedgame::dependent_part(p);
  REQUIRE(dep.num_classes() == 1);
  CHECK(std::abs(dep.class_conditional[0][0] - 0.75) <= 1e-12);
  CHECK(std::abs(dep.class_conditional[0][1] - 0.25) <= 1e-12);
}

TEST_CASE("triviality of the worked examples") {
  CHECK_FALSE(embedgame::is_trivial_primitive(one_of_two_ot()));
  CHECK(embedgame::is_trivial_primitive(shared_coin()));
  CHECK(embedgame::is_trivial_primitive(independent_biased()));
}

TEST_CASE("entropy identities on random primitives") {
  // I(X;Y) = I(dep;Y) means H(Y|dep) = H(Y|X); both identities below are
  // exact consequences of the dependent part being a sufficient statistic.
  Rng rng(0x5eed0001);
  int trivial_seen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Primitive p = trial % 4 == 3
                            ? testutil::random_trivial_primitive(rng)
                            : testutil::random_primitive(rng);
    const EntropyReport rep = embedgame::entropy_report(p);
    const double h_y_given_dep = rep.h_y_given_x;  // identity under test
    const DependentPartMap dep = embedgame::dependent_part(p);

    // Recompute H(Y|dep) and I(dep;Y) from the class decomposition.
    std::vector<double> class_mass(static_cast<std::size_t>(dep.num_classes()), 0.0);
    const std::vector<double> px = p.x_marginal();
    for (std::size_t x = 0; x < p.x_size(); ++x) {
      class_mass[static_cast<std::size_t>(dep.class_of[x])] += px[x];
    }
    double h_y_given_class = 0.0;
    for (int k = 0; k < dep.num_classes(); ++k) {
      h_y_given_class +=
          class_mass[static_cast<std::size_t>(k)] *
          embedgame::shannon_entropy(dep.class_conditional[static_cast<std::size_t>(k)]);
    }
    CHECK(std::abs(h_y_given_class - h_y_given_dep) <= 1e-9);

    const double i_dep_y = rep.h_y - h_y_given_class;
    CHECK(std::abs(i_dep_y - rep.i_xy) <= 1e-9);

    // Triviality is symmetric: the criterion on X matches the one on Y.
    const bool xy = rep.h_dep_xy_given_y <= 1e-9;
    const bool yx = rep.h_dep_yx_given_x <= 1e-9;
    CHECK(xy == yx);
    CHECK(embedgame::is_trivial_primitive(p) == xy);
    if (xy) ++trivial_seen;
  }
  // The suite must actually exercise both verdicts.
  CHECK(trivial_seen >= 100);
  CHECK(trivial_seen <= 900);
}

TEST_CASE("transposed primitive swaps the marginals") {
  Rng rng(0x5eed0002);
  for (int trial = 0; trial < 50; ++trial) {
    const Primitive p = testutil::random_primitive(rng);
    const Primitive q = p.transposed();
    const EntropyReport a = embedgame::entropy_report(p);
    const EntropyReport b = embedgame::entropy_report(q);
    CHECK(std::abs(a.h_x - b.h_y) <= 1e-12);
    CHECK(std::abs(a.h_y - b.h_x) <= 1e-12);
    CHECK(std::abs(a.i_xy - b.i_xy) <= 1e-12);
    CHECK(std::abs(a.h_dep_xy_given_y - b.h_dep_yx_given_x) <= 1e-12);
  }
}

TEST_CASE("honest two-step sampler reproduces the joint distribution") {
  const Primitive p = shared_coin();
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    counts[embedgame::classical_hbc_sample(p, static_cast<std::uint64_t>(i))]++;
  }
  // Only the diagonal cells may appear, each about half the time.
  CHECK(counts.size() == 2);
  std::vector<std::uint64_t> observed = {counts[{"h", "h"}], counts[{"t", "t"}]};
  const std::vector<double> expected = {n * 0.5, n * 0.5};
  CHECK(testutil::chi_square_stat(observed, expected) <= testutil::chi_square_99(1));
}

TEST_CASE("honest sampler covers a non-trivial class structure") {
  // For the OT primitive every symbol is its own class, so the two-step
  // sampler must reproduce the full joint table.
  const Primitive p = one_of_two_ot();
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  const int n = 80000;
  for (int i = 0; i < n; ++i) {
    const auto xy = embedgame::classical_hbc_sample(
        p, 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i));
    counts[xy]++;
  }
  CHECK(counts.size() == 8);  // eight cells carry probability 1/8
  std::vector<std::uint64_t> observed;
  std::vector<double> expected;
  for (const auto& [cell, num] : counts) {
    observed.push_back(num);
    expected.push_back(n / 8.0);
  }
  CHECK(testutil::chi_square_stat(observed, expected) <=
        testutil::chi_square_99(7));
}

}  // TEST_SUITE
