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

#include "embedgame/embedding.hpp"

#include <cmath>
#include <utility>

#include "embedgame/errors.hpp"
#include "embedgame/rng.hpp"

namespace embedgame {

RegularEmbedding::RegularEmbedding(Primitive primitive_in, int bob_dim_in,
                                   std::vector<double> alice_weights_in,
                                   std::vector<PureState> bob_states_in,
                                   std::vector<std::vector<double>> phases_in)
    : primitive(std::move(primitive_in)),
      bob_dim(bob_dim_in),
      alice_weights(std::move(alice_weights_in)),
      bob_states(std::move(bob_states_in)),
      phases(std::move(phases_in)) {
  const std::size_t nx = primitive.x_size();
  if (alice_weights.size() != nx || bob_states.size() != nx) {
    throw ValidationError("embedding: one weight and one receiver state per sender symbol");
  }
  double total = 0.0;
  for (double w : alice_weights) {
    if (!(w >= 0.0)) throw ValidationError("embedding: weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw ValidationError("embedding: weights must sum to 1 within 1e-12");
  }
  for (const PureState& s : bob_states) {
    if (s.dim() != bob_dim) {
      throw ValidationError("embedding: receiver states must have dimension bob_dim");
    }
  }
  if (phases.empty()) {
    phases.assign(nx, std::vector<double>(primitive.y_size(), 0.0));
  }
  if (phases.size() != nx) {
    throw ValidationError("embedding: phase matrix needs one row per sender symbol");
  }
  for (const auto& row : phases) {
    if (row.size() != primitive.y_size()) {
      throw ValidationError("embedding: phase matrix needs one column per receiver symbol");
    }
  }
}

PureState RegularEmbedding::joint_state() const {
  const int nx = static_cast<int>(primitive.x_size());
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(nx) * bob_dim);
  for (int x = 0; x < nx; ++x) {
    amps.segment(static_cast<Eigen::Index>(x) * bob_dim, bob_dim) =
        std::sqrt(alice_weights[x]) * bob_states[x].amplitudes;
  }
  return PureState({nx, bob_dim}, std::move(amps));
}

CanonicalEmbedding::CanonicalEmbedding(std::vector<double> weights_in,
                                       std::vector<RegularEmbedding> regular_parts_in)
    : weights(std::move(weights_in)), regular_parts(std::move(regular_parts_in)) {
  if (weights.empty() || weights.size() != regular_parts.size()) {
    throw ValidationError("canonical embedding: one weight per regular part required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("canonical embedding: weights must be >= 0");
    total += w * w;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw ValidationError("canonical embedding: squared weights must sum to 1 within 1e-12");
  }
}

RegularEmbedding build_regular_embedding(const Primitive& p,
                                         std::vector<std::vector<double>> phases) {
  const std::size_t nx = p.x_size();
  const std::size_t ny = p.y_size();
  if (phases.empty()) phases.assign(nx, std::vector<double>(ny, 0.0));

  const std::vector<double> px = p.x_marginal();
  std::vector<PureState> states;
  states.reserve(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    if (px[x] <= 0.0) {
      throw ValidationError(
          "build_regular_embedding: sender symbol '" + p.x_alphabet()[x] +
          "' has zero probability; drop it from the alphabet first");
    }
    const std::vector<double> row = p.row_conditional(x);
    Vector amps(ny);
    for (std::size_t y = 0; y < ny; ++y) {
      if (phases.size() != nx || phases[x].size() != ny) {
        throw ValidationError("build_regular_embedding: phase matrix must be |X| x |Y|");
      }
      amps(y) = std::sqrt(row[y]) * std::exp(Complex(0.0, phases[x][y]));
    }
    states.emplace_back(std::vector<int>{static_cast<int>(ny)}, std::move(amps));
  }
  return RegularEmbedding(p, static_cast<int>(ny), px, std::move(states), std::move(phases));
}

namespace {

// |psi><psi| with the sender and receiver registers decohered in the
// computational basis: keeps exactly the blocks where both classical indices
// agree on the two sides. Layout {dx, da, dy, db}.
DensityOp dephase_xy(const PureState& state) {
  const int da = state.dims[1], dy = state.dims[2], db = state.dims[3];
  const int total = state.dim();
  Matrix rho = state.amplitudes * state.amplitudes.adjoint();
  for (int i = 0; i < total; ++i) {
    const int xi = i / (da * dy * db);
    const int yi = (i / db) % dy;
    for (int j = 0; j < total; ++j) {
      const int xj = j / (da * dy * db);
      const int yj = (j / db) % dy;
      if (xi != xj || yi != yj) rho(i, j) = 0.0;
    }
  }
  return DensityOp::trusted(state.dims, std::move(rho));
}

double mutual_information(const DensityOp& rho, const std::vector<int>& left,
                          const std::vector<int>& right) {
  std::vector<int> both = left;
  both.insert(both.end(), right.begin(), right.end());
  return von_neumann_entropy(partial_trace(rho, left)) +
         von_neumann_entropy(partial_trace(rho, right)) -
         von_neumann_entropy(partial_trace(rho, both));
}

PureState four_register_state(const RegularEmbedding& e) {
  const PureState joint = e.joint_state();
  return PureState({static_cast<int>(e.primitive.x_size()), 1, e.bob_dim, 1}, joint.amplitudes);
}

}  // namespace

bool check_correct(const PureState& state, const Primitive& p) {
  if (state.dims.size() != 4) {
    throw ValidationError("check_correct: state needs layout {sender, ancilla, receiver, ancilla}");
  }
  if (state.dims[0] != static_cast<int>(p.x_size()) ||
      state.dims[2] != static_cast<int>(p.y_size())) {
    throw ValidationError("check_correct: classical register sizes must match the alphabets");
  }
  const DensityOp rho = dephase_xy(state);
  const double target = entropy_report(p).i_xy;
  // Registers: 0 = X, 1 = sender ancilla, 2 = Y, 3 = receiver ancilla.
  const double sender_view = mutual_information(rho, {0, 1}, {2});
  const double receiver_view = mutual_information(rho, {0}, {2, 3});
  return std::abs(sender_view - target) <= kEmbeddingTrivialTol &&
         std::abs(receiver_view - target) <= kEmbeddingTrivialTol;
}

bool check_correct(const RegularEmbedding& e, const Primitive& p) {
  return check_correct(four_register_state(e), p);
}

EmbeddingClassification classify_embedding(const RegularEmbedding& e) {
  const Primitive& p = e.primitive;
  if (e.bob_dim != static_cast<int>(p.y_size())) {
    throw ValidationError("classify_embedding: receiver register must match the y alphabet");
  }

  EmbeddingClassification out;

  // Sender side: S(row-class | B) on sum_x w_x |g(x)><g(x)| (x) |psi_x><psi_x|.
  {
    const DependentPartMap dp = dependent_part(p);
    const int ng = std::max(dp.num_classes(), 1);
    const int db = e.bob_dim;
    Matrix gb = Matrix::Zero(static_cast<Eigen::Index>(ng) * db, static_cast<Eigen::Index>(ng) * db);
    for (std::size_t x = 0; x < p.x_size(); ++x) {
      const double w = e.alice_weights[x];
      if (w <= 0.0 || dp.class_of[x] == DependentPartMap::kNullClass) continue;
      const int g = dp.class_of[x];
      const Vector& psi = e.bob_states[x].amplitudes;
      gb.block(g * db, g * db, db, db) += w * (psi * psi.adjoint());
    }
    const DensityOp rho_gb = DensityOp::trusted({ng, db}, std::move(gb));
    out.s_dep_xy_given_b =
        von_neumann_entropy(rho_gb) - von_neumann_entropy(partial_trace(rho_gb, {1}));
  }

  // Receiver side: conditional sender states phi_y from the joint state, with
  // classes drawn from the transposed primitive.
  {
    const DependentPartMap dq = dependent_part(p.transposed());
    const int ng = std::max(dq.num_classes(), 1);
    const int nx = static_cast<int>(p.x_size());
    Matrix ga = Matrix::Zero(static_cast<Eigen::Index>(ng) * nx, static_cast<Eigen::Index>(ng) * nx);
    for (int y = 0; y < e.bob_dim; ++y) {
      if (dq.class_of[y] == DependentPartMap::kNullClass) continue;
      Vector a(nx);
      for (int x = 0; x < nx; ++x) {
        a(x) = std::sqrt(e.alice_weights[x]) * e.bob_states[x].amplitudes(y);
      }
      const double qy = a.squaredNorm();
      if (qy <= 0.0) continue;
      const int g = dq.class_of[y];
      ga.block(g * nx, g * nx, nx, nx) += a * a.adjoint();
    }
    const DensityOp rho_ga = DensityOp::trusted({ng, nx}, std::move(ga));
    out.s_dep_yx_given_a =
        von_neumann_entropy(rho_ga) - von_neumann_entropy(partial_trace(rho_ga, {1}));
  }

  out.verdict = std::min(out.s_dep_xy_given_b, out.s_dep_yx_given_a) <= kEmbeddingTrivialTol
                    ? EmbeddingVerdict::kTrivial
                    : EmbeddingVerdict::kNonTrivial;
  return out;
}

ComparisonPair find_comparison_pair(const RegularEmbedding& e) {
  const std::size_t nx = e.primitive.x_size();
  bool found = false;
  ComparisonPair best;
  double best_gain = -1.0;
  for (std::size_t i = 0; i < nx; ++i) {
    if (e.alice_weights[i] <= 0.0) continue;
    for (std::size_t j = i + 1; j < nx; ++j) {
      if (e.alice_weights[j] <= 0.0) continue;
      const double tau = overlap(e.bob_states[i], e.bob_states[j]);
      if (tau <= 1e-6 || tau >= 1.0 - 1e-6) continue;
      const double gain = tau * (1.0 - tau);
      if (gain > best_gain) {
        best_gain = gain;
        best = ComparisonPair{i, j, e.primitive.x_alphabet()[i], e.primitive.x_alphabet()[j], tau};
        found = true;
      }
    }
  }
  if (!found) {
    throw NotFoundError(
        "find_comparison_pair: every usable state pair is parallel or orthogonal");
  }
  return best;
}

std::pair<std::size_t, RegularEmbedding> collapse_to_regular(const CanonicalEmbedding& c,
                                                             std::uint64_t seed) {
  std::vector<double> probs(c.weights.size());
  for (std::size_t k = 0; k < c.weights.size(); ++k) probs[k] = c.weights[k] * c.weights[k];
  Rng rng(seed);
  const std::size_t k = rng.pick(probs);
  return {k, c.regular_parts[k]};
}

}  // namespace embedgame
