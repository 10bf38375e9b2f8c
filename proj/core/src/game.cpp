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

#include "embedgame/game.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "embedgame/discrimination.hpp"
#include "embedgame/errors.hpp"
#include "embedgame/rng.hpp"

namespace embedgame {

namespace {

constexpr int kAnswerSame = 0;
constexpr int kAnswerDifferent = 1;
constexpr int kAnswerPass = 2;

int answer_index(Answer a) {
  switch (a) {
    case Answer::kSame:
      return kAnswerSame;
    case Answer::kDifferent:
      return kAnswerDifferent;
    case Answer::kInconclusive:
      return kAnswerPass;
  }
  throw ValidationError("unknown answer value");
}

double expectation(const Matrix& op, const Vector& z) {
  return std::real(Complex(z.adjoint() * op * z));
}

void validate_factored(const FactoredStrategy& f) {
  const std::size_t n0 = f.first.size();
  const std::size_t n1 = f.second.size();
  if (f.answers.size() != n0) {
    throw ValidationError("answer table rows must match first POVM outcomes");
  }
  for (const auto& row : f.answers) {
    if (row.size() != n1) {
      throw ValidationError(
          "answer table columns must match second POVM outcomes");
    }
  }
}

// Probability of announcing {same, different, pass} on a joint challenge
// whose first register has dimension left_dim.
std::array<double, 3> answer_distribution(const ComparisonStrategy& s,
                                          const PureState& challenge,
                                          int left_dim) {
  std::array<double, 3> dist{0.0, 0.0, 0.0};
  const Vector& z = challenge.amplitudes;
  if (s.kind == StrategyKind::kCoherent) {
    if (!s.joint.has_value()) {
      throw ValidationError("coherent strategy is missing its joint POVM");
    }
    const Povm& povm = *s.joint;
    if (povm.size() != 3) {
      throw ValidationError("joint comparison POVM must have three outcomes");
    }
    if (povm.dim() != challenge.dim()) {
      throw ValidationError("joint POVM dimension does not match challenge");
    }
    for (int k = 0; k < 3; ++k) {
      dist[static_cast<std::size_t>(k)] =
          std::max(0.0, expectation(povm.elements[static_cast<std::size_t>(k)], z));
    }
  } else {
    if (!s.factored.has_value()) {
      throw ValidationError("factored strategy is missing its local POVMs");
    }
    const FactoredStrategy& f = *s.factored;
    validate_factored(f);
    if (f.first.dim() != left_dim ||
        f.first.dim() * f.second.dim() != challenge.dim()) {
      throw ValidationError("local POVM dimensions do not match challenge");
    }
    for (std::size_t i = 0; i < f.first.size(); ++i) {
      for (std::size_t j = 0; j < f.second.size(); ++j) {
        const Matrix cell = kron(f.first.elements[i], f.second.elements[j]);
        dist[static_cast<std::size_t>(answer_index(f.answers[i][j]))] +=
            std::max(0.0, expectation(cell, z));
      }
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Coherent optimum via the symmetry-reduced concave program.
//
// With orthonormal span basis (b1, b2), psi0 = b1 and psi1 = tau b1 + s b2
// (after fixing the free global phase), swap symmetry and the zero-error
// support conditions force
//   E_same = a wA wA^T + b wB wB^T + m (wA wB^T + wB wA^T)
//   E_diff = beta zB zB^T  (+ the full antisymmetric projector)
// on the symmetric sector with basis {b1b1, (b1b2 + b2b1)/sqrt2, b2b2}, where
// wA, wB span the complement of the symmetrized mixed challenge and zB the
// complement of the two aligned challenges. The payoff is linear in
// p = (a, b, m, beta), and M1 = [[a, m], [m, b]] >= 0, beta >= 0, X(p) <= I
// carve out a convex set, so a log-barrier Newton iteration lands on the
// global optimum.
// ---------------------------------------------------------------------------

struct ReducedProgram {
  Eigen::Vector4d g;               // payoff gradient in (a, b, m, beta)
  double constant = 0.0;           // saturated antisymmetric contribution
  Eigen::Matrix3d aa, ab, am, az;  // dX/dp_i on the symmetric sector
};

ReducedProgram reduced_program(double tau) {
  const double s = std::sqrt(1.0 - tau * tau);
  const double n1 = 1.0 + tau * tau;
  const double sqrt2 = std::numbers::sqrt2;

  const Eigen::Vector3d wa(0.0, 0.0, 1.0);
  const Eigen::Vector3d wb =
      Eigen::Vector3d(s, -sqrt2 * tau, 0.0) / std::sqrt(n1);
  const Eigen::Vector3d zb =
      Eigen::Vector3d(0.0, sqrt2 * s, -2.0 * tau) / std::sqrt(2.0 * n1);

  // Symmetric coordinates of the two aligned challenges and of the common
  // symmetric part of the two mixed ones.
  const Eigen::Vector3d u1(1.0, 0.0, 0.0);
  const Eigen::Vector3d u2(tau * tau, sqrt2 * tau * s, s * s);
  const Eigen::Vector3d vs(tau, s / sqrt2, 0.0);

  const double u1a = u1.dot(wa), u1b = u1.dot(wb);
  const double u2a = u2.dot(wa), u2b = u2.dot(wb);
  const double vz = vs.dot(zb);

  ReducedProgram rp;
  rp.g(0) = 0.25 * (u1a * u1a + u2a * u2a);
  rp.g(1) = 0.25 * (u1b * u1b + u2b * u2b);
  rp.g(2) = 0.5 * (u1a * u1b + u2a * u2b);
  rp.g(3) = 0.5 * vz * vz;
  // Each mixed challenge carries weight 1/4 and antisymmetric mass s^2 / 2.
  rp.constant = s * s / 4.0;

  rp.aa = wa * wa.transpose();
  rp.ab = wb * wb.transpose();
  rp.am = wa * wb.transpose() + wb * wa.transpose();
  rp.az = zb * zb.transpose();
  return rp;
}

Eigen::Matrix3d constraint_matrix(const ReducedProgram& rp,
                                  const Eigen::Vector4d& p) {
  return p(0) * rp.aa + p(1) * rp.ab + p(2) * rp.am + p(3) * rp.az;
}

bool reduced_feasible(const ReducedProgram& rp, const Eigen::Vector4d& p) {
  if (!(p(3) > 0.0)) return false;
  Eigen::Matrix2d m1;
  m1 << p(0), p(2), p(2), p(1);
  if (Eigen::LLT<Eigen::Matrix2d>(m1).info() != Eigen::Success) return false;
  const Eigen::Matrix3d m2 =
      Eigen::Matrix3d::Identity() - constraint_matrix(rp, p);
  return Eigen::LLT<Eigen::Matrix3d>(m2).info() == Eigen::Success;
}

double barrier_value(const ReducedProgram& rp, const Eigen::Vector4d& p,
                     double mu) {
  Eigen::Matrix2d m1;
  m1 << p(0), p(2), p(2), p(1);
  const Eigen::Matrix3d m2 =
      Eigen::Matrix3d::Identity() - constraint_matrix(rp, p);
  return rp.g.dot(p) + mu * (std::log(m1.determinant()) + std::log(p(3)) +
                             std::log(m2.determinant()));
}

Eigen::Vector4d solve_reduced(const ReducedProgram& rp) {
  Eigen::Vector4d p(0.2, 0.2, 0.0, 0.2);
  while (!reduced_feasible(rp, p)) p *= 0.5;

  const std::array<const Eigen::Matrix3d*, 4> dx = {&rp.aa, &rp.ab, &rp.am,
                                                    &rp.az};
  Eigen::Matrix2d b_a, b_b, b_m;
  b_a << 1, 0, 0, 0;
  b_b << 0, 0, 0, 1;
  b_m << 0, 1, 1, 0;
  const std::array<const Eigen::Matrix2d*, 3> dm1 = {&b_a, &b_b, &b_m};

  for (double mu = 1e-2; mu >= 1e-12; mu *= 0.2) {
    for (int iter = 0; iter < 60; ++iter) {
      Eigen::Matrix2d m1;
      m1 << p(0), p(2), p(2), p(1);
      const Eigen::Matrix2d m1i = m1.inverse();
      const Eigen::Matrix3d m2i =
          (Eigen::Matrix3d::Identity() - constraint_matrix(rp, p)).inverse();

      Eigen::Vector4d grad = rp.g;
      grad(0) += mu * m1i(0, 0);
      grad(1) += mu * m1i(1, 1);
      grad(2) += mu * 2.0 * m1i(0, 1);
      grad(3) += mu / p(3);
      for (int i = 0; i < 4; ++i) {
        grad(i) -= mu * (m2i * *dx[static_cast<std::size_t>(i)]).trace();
      }

      Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          hess(i, j) -= mu * (m1i * *dm1[static_cast<std::size_t>(i)] * m1i *
                              *dm1[static_cast<std::size_t>(j)])
                                 .trace();
        }
      }
      hess(3, 3) -= mu / (p(3) * p(3));
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          hess(i, j) -= mu * (m2i * *dx[static_cast<std::size_t>(i)] * m2i *
                              *dx[static_cast<std::size_t>(j)])
                                 .trace();
        }
      }

      const Eigen::Vector4d step = hess.fullPivLu().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement)) break;

      const double base = barrier_value(rp, p, mu);
      double t = 1.0;
      Eigen::Vector4d next = p + t * step;
      while (t > 1e-14 &&
             (!reduced_feasible(rp, next) ||
              barrier_value(rp, next, mu) < base + 0.25 * t * decrement)) {
        t *= 0.5;
        next = p + t * step;
      }
      if (t <= 1e-14) break;
      p = next;
      if (std::abs(decrement) * t < 1e-13) break;
    }
  }
  return p;
}

}  // namespace

int thread_budget() {
  if (const char* env = std::getenv("EMBEDGAME_THREADS")) {
    int value = 0;
    const char* end = env;
    while (*end != '\0') ++end;
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end) {
      return std::clamp(value, 1, 64);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

ComparisonStates comparison_states(const RegularEmbedding& e,
                                   const std::string& x0,
                                   const std::string& x1) {
  if (x0 == x1) {
    throw ValidationError("comparison needs two distinct sender symbols");
  }
  const std::size_t i0 = e.primitive.x_index(x0);
  const std::size_t i1 = e.primitive.x_index(x1);
  const PureState& psi0 = e.bob_states[i0];
  const PureState& psi1 = e.bob_states[i1];
  ComparisonStates cs;
  cs.same.push_back(tensor(psi0, psi0));
  cs.same.push_back(tensor(psi1, psi1));
  cs.different.push_back(tensor(psi0, psi1));
  cs.different.push_back(tensor(psi1, psi0));
  return cs;
}

double expected_payoff(double q_c, double q_err, double c) {
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  if (!(q_err >= 0.0 && q_c <= 1.0 && q_err <= q_c)) {
    throw ValidationError("rates must satisfy 0 <= q_err <= q_c <= 1");
  }
  return q_c - q_err - c * q_err;
}

double pairwise_payoff(double q0, double q1, double c) {
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  if (!(q0 >= 0.0 && q0 <= 1.0 && q1 >= 0.0 && q1 <= 1.0)) {
    throw ValidationError("error rates must lie in [0, 1]");
  }
  const double wrong = q0 + q1 - 2.0 * q0 * q1;
  return 1.0 - (c + 1.0) * wrong;
}

ComparisonStrategy coherent_optimal_comparison(const PureState& psi0,
                                               const PureState& psi1) {
  if (psi0.dims != psi1.dims) {
    throw ValidationError("states to compare must share dimensions");
  }
  const Complex gamma = inner(psi0, psi1);
  const double tau = std::abs(gamma);
  if (tau <= 1e-12 || tau >= 1.0 - 1e-12) {
    throw ValidationError(
        "comparison needs states with overlap strictly between 0 and 1");
  }

  const ReducedProgram rp = reduced_program(tau);
  const Eigen::Vector4d p = solve_reduced(rp);
  const double value = rp.g.dot(p) + rp.constant;
  if (!(value >= 1.0 - tau - 1e-4)) {
    throw ConvergenceError("comparison program stalled below the optimum");
  }

  // Lift (a, b, m, beta) back to the doubled register. The span basis is
  // b1 = e^{i phi} psi0, with the phase chosen so <b1|psi1> = tau, and b2 the
  // normalized component of psi1 orthogonal to psi0.
  const Complex phase = gamma / tau;
  const Vector b1 = phase * psi0.amplitudes;
  Vector b2 = psi1.amplitudes - gamma * psi0.amplitudes;
  b2 /= b2.norm();

  const std::array<Vector, 4> span = {kron(b1, b1), kron(b1, b2), kron(b2, b1),
                                      kron(b2, b2)};
  const int d = psi0.dim();
  Matrix q(d * d, 4);
  for (int k = 0; k < 4; ++k) q.col(k) = span[static_cast<std::size_t>(k)];

  // Lift from the symmetric sector basis into span coordinates, and append
  // the antisymmetric direction.
  Eigen::Matrix<double, 4, 3> lift = Eigen::Matrix<double, 4, 3>::Zero();
  lift(0, 0) = 1.0;
  lift(1, 1) = 1.0 / std::numbers::sqrt2;
  lift(2, 1) = 1.0 / std::numbers::sqrt2;
  lift(3, 2) = 1.0;
  const Eigen::Vector4d anti(0.0, 1.0 / std::numbers::sqrt2,
                             -1.0 / std::numbers::sqrt2, 0.0);

  const Eigen::Matrix3d e_same_sym = p(0) * rp.aa + p(1) * rp.ab + p(2) * rp.am;
  const Eigen::Matrix3d e_diff_sym = p(3) * rp.az;
  const Eigen::Matrix4d e_same_span = lift * e_same_sym * lift.transpose();
  const Eigen::Matrix4d e_diff_span =
      lift * e_diff_sym * lift.transpose() + anti * anti.transpose();

  Matrix e_same = q * e_same_span.cast<Complex>() * q.adjoint();
  Matrix e_diff = q * e_diff_span.cast<Complex>() * q.adjoint();
  Matrix e_pass = Matrix::Identity(d * d, d * d) - e_same - e_diff;

  std::vector<int> dims = psi0.dims;
  dims.insert(dims.end(), psi0.dims.begin(), psi0.dims.end());
  ComparisonStrategy strategy;
  strategy.kind = StrategyKind::kCoherent;
  strategy.joint =
      Povm(std::move(dims),
           {std::move(e_same), std::move(e_diff), std::move(e_pass)},
           {"0", "1", "?"});
  return strategy;
}

ComparisonStrategy separable_product_strategy(const PureState& psi0,
                                              const PureState& psi1) {
  Povm local = optimal_unambiguous_povm(psi0, psi1);
  FactoredStrategy f{local, local, {}};
  // Outcomes are {identified 0, identified 1, inconclusive}; answer the XOR
  // of the identifications and pass whenever either side passed.
  f.answers.assign(3, std::vector<Answer>(3, Answer::kInconclusive));
  f.answers[0][0] = Answer::kSame;
  f.answers[1][1] = Answer::kSame;
  f.answers[0][1] = Answer::kDifferent;
  f.answers[1][0] = Answer::kDifferent;
  ComparisonStrategy strategy;
  strategy.kind = StrategyKind::kSeparableProduct;
  strategy.factored = std::move(f);
  return strategy;
}

ComparisonStrategy blind_guess_strategy(const std::vector<int>& dims) {
  int total = 1;
  for (int d : dims) total *= d;
  ComparisonStrategy strategy;
  strategy.kind = StrategyKind::kCoherent;
  strategy.joint = Povm(dims,
                        {Matrix::Identity(total, total),
                         Matrix::Zero(total, total),
                         Matrix::Zero(total, total)},
                        {"0", "1", "?"});
  return strategy;
}

PayoffReport evaluate_strategy(const ComparisonStrategy& s,
                               const ComparisonStates& states, double c) {
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  if (states.same.size() != 2 || states.different.size() != 2) {
    throw ValidationError("challenge set must hold two pairs of states");
  }

  PayoffReport report;
  const std::array<const PureState*, 4> challenge = {
      &states.same[0], &states.same[1], &states.different[0],
      &states.different[1]};
  const std::array<int, 4> truth = {kAnswerSame, kAnswerSame,
                                    kAnswerDifferent, kAnswerDifferent};
  for (std::size_t t = 0; t < 4; ++t) {
    const PureState& z = *challenge[t];
    // The challenges are products over a register list split in half.
    if (z.dims.size() % 2 != 0) {
      throw ValidationError("challenge register list must split in half");
    }
    int left_dim = 1;
    for (std::size_t r = 0; r < z.dims.size() / 2; ++r) left_dim *= z.dims[r];

    const std::array<double, 3> dist = answer_distribution(s, z, left_dim);
    report.q_c += 0.25 * (dist[0] + dist[1]);
    const int wrong =
        truth[t] == kAnswerSame ? kAnswerDifferent : kAnswerSame;
    report.q_err += 0.25 * dist[static_cast<std::size_t>(wrong)];
  }
  // Per-cell clamping can push the conclusive mass a few ulp past 1.
  report.q_c = std::min(report.q_c, 1.0);
  report.q_err = std::min(report.q_err, report.q_c);
  report.payoff = expected_payoff(report.q_c, report.q_err, c);
  return report;
}

void optimize_answer_table(FactoredStrategy& s, const PureState& psi0,
                           const PureState& psi1, double c) {
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  if (psi0.dims != psi1.dims) {
    throw ValidationError("challenge states must share dimensions");
  }
  if (s.first.dim() != psi0.dim() || s.second.dim() != psi0.dim()) {
    throw ValidationError("local POVM dimensions do not match the states");
  }
  const std::size_t n0 = s.first.size();
  const std::size_t n1 = s.second.size();
  std::vector<std::array<double, 2>> pl(n0), pr(n1);
  for (std::size_t i = 0; i < n0; ++i) {
    pl[i] = {std::max(0.0, expectation(s.first.elements[i], psi0.amplitudes)),
             std::max(0.0, expectation(s.first.elements[i], psi1.amplitudes))};
  }
  for (std::size_t j = 0; j < n1; ++j) {
    pr[j] = {std::max(0.0, expectation(s.second.elements[j], psi0.amplitudes)),
             std::max(0.0, expectation(s.second.elements[j], psi1.amplitudes))};
  }
  s.answers.assign(n0, std::vector<Answer>(n1, Answer::kInconclusive));
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      const double p_same = 0.25 * (pl[i][0] * pr[j][0] + pl[i][1] * pr[j][1]);
      const double p_diff = 0.25 * (pl[i][0] * pr[j][1] + pl[i][1] * pr[j][0]);
      const double gain_same = p_same - c * p_diff;
      const double gain_diff = p_diff - c * p_same;
      if (gain_same <= 0.0 && gain_diff <= 0.0) continue;
      s.answers[i][j] =
          gain_same >= gain_diff ? Answer::kSame : Answer::kDifferent;
    }
  }
}

PayoffReport simulate_protocol(const RegularEmbedding& e, const GameConfig& cfg,
                               const ComparisonStrategy& s) {
  const Primitive& p = e.primitive;
  if (cfg.copies < 4) {
    throw ValidationError("a session needs at least four parallel copies");
  }
  if (cfg.trials == 0) throw ValidationError("trial count must be positive");
  if (!(cfg.c > 0.0)) throw ValidationError("penalty must be positive");
  const std::size_t i0 = p.x_index(cfg.x0);
  const std::size_t i1 = p.x_index(cfg.x1);
  if (i0 == i1) throw ValidationError("challenge symbols must be distinct");
  const double tau = overlap(e.bob_states[i0], e.bob_states[i1]);
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0) || std::abs(cfg.tau - tau) > 1e-9) {
    throw ValidationError(
        "configured overlap does not match the embedded states");
  }

  // Answer distribution per (left symbol, right symbol) challenge cell.
  const std::array<const PureState*, 2> psi = {&e.bob_states[i0],
                                               &e.bob_states[i1]};
  std::array<std::array<std::array<double, 3>, 2>, 2> dist{};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      dist[a][b] =
          answer_distribution(s, tensor(*psi[a], *psi[b]), psi[a]->dim());
    }
  }

  const std::vector<double>& pmf = e.alice_weights;

  struct ChunkCounts {
    std::uint64_t correct = 0;
    std::uint64_t wrong = 0;
    std::uint64_t aborts = 0;
    std::array<std::uint64_t, 4> cells{};
  };

  constexpr int kChunks = 64;
  std::array<ChunkCounts, kChunks> partial{};
  const std::uint64_t n = cfg.trials;

  auto run_chunk = [&](int chunk) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(chunk) / kChunks;
    const std::uint64_t end =
        n * (static_cast<std::uint64_t>(chunk) + 1) / kChunks;
    ChunkCounts counts;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = Rng::child(cfg.seed, t);
      int seen0 = 0, seen1 = 0;
      for (int m = 0; m < cfg.copies; ++m) {
        const std::size_t x = rng.pick(pmf);
        if (x == i0) ++seen0;
        if (x == i1) ++seen1;
      }
      if (seen0 < 2 || seen1 < 2) {
        ++counts.aborts;
        continue;
      }
      const std::size_t a = rng.next_u64() & 1;
      const std::size_t b = rng.next_u64() & 1;
      ++counts.cells[a * 2 + b];
      const auto& cell = dist[a][b];
      const double u = rng.next_double();
      int answer = kAnswerPass;
      if (u < cell[0]) {
        answer = kAnswerSame;
      } else if (u < cell[0] + cell[1]) {
        answer = kAnswerDifferent;
      }
      if (answer == kAnswerPass) continue;
      const int truth = (a == b) ? kAnswerSame : kAnswerDifferent;
      if (answer == truth) {
        ++counts.correct;
      } else {
        ++counts.wrong;
      }
    }
    partial[static_cast<std::size_t>(chunk)] = counts;
  };

  const int workers = std::min(thread_budget(), kChunks);
  if (workers <= 1) {
    for (int g = 0; g < kChunks; ++g) run_chunk(g);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int g = next.fetch_add(1); g < kChunks; g = next.fetch_add(1)) {
          run_chunk(g);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  ChunkCounts total;
  for (const ChunkCounts& counts : partial) {
    total.correct += counts.correct;
    total.wrong += counts.wrong;
    total.aborts += counts.aborts;
    for (std::size_t k = 0; k < 4; ++k) total.cells[k] += counts.cells[k];
  }

  PayoffReport report;
  report.trials = n;
  report.challenge_counts = total.cells;
  report.abort_prob =
      static_cast<double>(total.aborts) / static_cast<double>(n);
  const double denom = static_cast<double>(n);
  report.q_c = static_cast<double>(total.correct + total.wrong) / denom;
  report.q_err = static_cast<double>(total.wrong) / denom;
  report.payoff = (static_cast<double>(total.correct) -
                   cfg.c * static_cast<double>(total.wrong)) /
                  denom;
  if (n > 1) {
    // Per-session score is +1, -c or 0, so moments follow from the counts.
    const double second = (static_cast<double>(total.correct) +
                           cfg.c * cfg.c * static_cast<double>(total.wrong)) /
                          denom;
    const double var =
        std::max(0.0, second - report.payoff * report.payoff) * denom /
        (denom - 1.0);
    report.std_error = std::sqrt(var / denom);
  }
  return report;
}

SeparableSearchResult separable_search(double tau, double c,
                                       std::uint64_t budget,
                                       std::uint64_t seed) {
  if (!(tau > 1e-6 && tau < 1.0 - 1e-6)) {
    throw ValidationError("overlap must lie strictly inside (0, 1)");
  }
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  if (budget == 0) throw ValidationError("search budget must be positive");

  const double s = std::sqrt(1.0 - tau * tau);
  Vector psi0v(2), psi1v(2);
  psi0v << 1.0, 0.0;
  psi1v << tau, s;
  const PureState psi0(std::vector<int>{2}, psi0v);
  const PureState psi1(std::vector<int>{2}, psi1v);

  using Side = std::vector<Eigen::Matrix2cd>;
  using Genome = std::array<Side, 2>;

  Rng rng(seed);
  auto random_factor = [&](double scale) {
    Eigen::Matrix2cd g;
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) {
        g(r, col) =
            Complex(scale * rng.next_gaussian(), scale * rng.next_gaussian());
      }
    }
    return g;
  };
  auto random_side = [&] {
    const std::size_t outcomes = 2 + (rng.next_u64() % 3);
    Side side;
    side.reserve(outcomes);
    for (std::size_t i = 0; i < outcomes; ++i) {
      side.push_back(random_factor(1.0));
    }
    return side;
  };

  // Normalized POVM from raw factors: F_i = S^{-1/2} G_i G_i^dag S^{-1/2}.
  auto realize_side = [](const Side& side, Side& out) {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    Side raw;
    raw.reserve(side.size());
    for (const auto& g : side) {
      raw.push_back(g * g.adjoint());
      sum += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(sum);
    if (es.eigenvalues()(0) < 1e-9) return false;
    const Eigen::Vector2d inv_sqrt =
        es.eigenvalues().cwiseSqrt().cwiseInverse();
    const Eigen::Matrix2cd w =
        es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    out.clear();
    out.reserve(raw.size());
    for (const auto& a : raw) out.push_back(w * a * w);
    return true;
  };

  struct Candidate {
    double payoff = 0.0;
    double q_c = 0.0;
    double q_err = 0.0;
    Genome elements;
    std::vector<std::vector<Answer>> answers;
  };

  // Cell-wise optimal answers make the payoff additive over outcome pairs,
  // so each candidate is scored exactly without enumerating tables.
  auto evaluate = [&](const Genome& genome, Candidate& out) {
    Genome elements;
    if (!realize_side(genome[0], elements[0])) return false;
    if (!realize_side(genome[1], elements[1])) return false;
    std::array<std::vector<std::array<double, 2>>, 2> probs;
    for (std::size_t side = 0; side < 2; ++side) {
      for (const auto& f : elements[side]) {
        probs[side].push_back(
            {std::max(0.0, std::real(Complex(psi0v.adjoint() * f * psi0v))),
             std::max(0.0, std::real(Complex(psi1v.adjoint() * f * psi1v)))});
      }
    }
    double payoff = 0.0, q_c = 0.0, q_err = 0.0;
    out.answers.assign(
        probs[0].size(),
        std::vector<Answer>(probs[1].size(), Answer::kInconclusive));
    for (std::size_t i = 0; i < probs[0].size(); ++i) {
      for (std::size_t j = 0; j < probs[1].size(); ++j) {
        const double p_same = 0.25 * (probs[0][i][0] * probs[1][j][0] +
                                      probs[0][i][1] * probs[1][j][1]);
        const double p_diff = 0.25 * (probs[0][i][0] * probs[1][j][1] +
                                      probs[0][i][1] * probs[1][j][0]);
        const double gain_same = p_same - c * p_diff;
        const double gain_diff = p_diff - c * p_same;
        if (gain_same <= 0.0 && gain_diff <= 0.0) continue;
        if (gain_same >= gain_diff) {
          out.answers[i][j] = Answer::kSame;
          payoff += gain_same;
          q_err += p_diff;
        } else {
          out.answers[i][j] = Answer::kDifferent;
          payoff += gain_diff;
          q_err += p_same;
        }
        q_c += p_same + p_diff;
      }
    }
    out.payoff = payoff;
    out.q_c = q_c;
    out.q_err = q_err;
    out.elements = std::move(elements);
    return true;
  };

  // Candidate 0 is the exact local unambiguous pair; the rest of the budget
  // alternates fresh samples with perturbations of the incumbent.
  Genome best_genome;
  {
    const Povm local = optimal_unambiguous_povm(psi0, psi1);
    Side side;
    for (const Matrix& element : local.elements) {
      // A factor G with G G^dag = (1 + tau) element, so the realized POVM
      // reproduces the unambiguous discriminator exactly.
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(
          Eigen::Matrix2cd((1.0 + tau) * element));
      const Eigen::Vector2d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      side.push_back(es.eigenvectors() * root.asDiagonal() *
                     es.eigenvectors().adjoint());
    }
    best_genome = {side, side};
  }

  Candidate best;
  if (!evaluate(best_genome, best)) {
    throw ConvergenceError("seed strategy failed to normalize");
  }

  for (std::uint64_t k = 1; k < budget; ++k) {
    Genome candidate_genome;
    if (k % 3 == 1) {
      candidate_genome = {random_side(), random_side()};
    } else {
      candidate_genome = best_genome;
      const double sigma =
          0.3 * std::pow(0.5, 4.0 * static_cast<double>(k) /
                                  static_cast<double>(budget));
      Side& side = candidate_genome[rng.next_u64() % 2];
      side[rng.next_u64() % side.size()] += random_factor(sigma);
    }
    Candidate candidate;
    if (!evaluate(candidate_genome, candidate)) continue;
    if (candidate.payoff > best.payoff) {
      best = std::move(candidate);
      best_genome = std::move(candidate_genome);
    }
  }

  const std::vector<int> local_dims{2};
  std::vector<Matrix> first_elems, second_elems;
  std::vector<std::string> first_labels, second_labels;
  for (std::size_t i = 0; i < best.elements[0].size(); ++i) {
    first_elems.push_back(best.elements[0][i]);
    first_labels.push_back(std::to_string(i));
  }
  for (std::size_t j = 0; j < best.elements[1].size(); ++j) {
    second_elems.push_back(best.elements[1][j]);
    second_labels.push_back(std::to_string(j));
  }

  SeparableSearchResult result;
  result.tau = tau;
  result.c = c;
  result.budget = budget;
  result.seed = seed;
  result.strategy.kind = StrategyKind::kSeparableGeneral;
  result.strategy.factored =
      FactoredStrategy{Povm(local_dims, first_elems, first_labels),
                       Povm(local_dims, second_elems, second_labels),
                       best.answers};
  result.best.q_c = best.q_c;
  result.best.q_err = best.q_err;
  result.best.payoff = best.payoff;
  return result;
}

GapCertificate gap_certificate(double tau) {
  if (!(tau >= 0.01 && tau <= 0.99)) {
    throw ValidationError("certificate overlap must lie in [0.01, 0.99]");
  }

  GapCertificate cert;
  cert.tau = tau;
  cert.k = 20.0 / (9.0 * tau * (1.0 - tau));
  cert.f_tau = tau * (1.0 - tau) / 10.0;
  cert.p_max = 1.0 - tau;
  cert.b0 = (1.0 - tau) - 1.0 / (2.0 * cert.k);
  cert.b1 = (1.0 - tau) * (1.0 - tau) + 2.0 / cert.k;
  cert.q_upper = tau * tau * (1.0 - tau) / 256.0;

  const double target = cert.p_max - cert.f_tau;
  constexpr double kSlack = 1e-12;
  if (cert.b0 > target + kSlack || cert.b1 > target + kSlack) return cert;

  // The mid-range bound grows with the error rate, and these two chain
  // conditions pin its value at q_upper exactly on the target.
  const double chain_left =
      2.0 * cert.f_tau + 4.0 * std::sqrt(cert.q_upper * (1.0 - tau));
  const double chain_right = (tau * (1.0 - tau) - cert.f_tau) / 2.0;
  if (chain_left > 1.0 / cert.k + kSlack ||
      1.0 / cert.k > chain_right + kSlack) {
    return cert;
  }

  const double c_base = std::max(10.0, 257.0 * (1.0 - tau));
  for (int t = 0; t <= 20; ++t) {
    const double c = c_base * std::pow(2.0, t);
    const double q_lower = 1.0 / (2.0 * cert.k * (c + 1.0));
    if (!(q_lower < cert.q_upper)) continue;
    // Above q_upper every answering pattern loses money outright.
    if (1.0 - (1.0 + c) * cert.q_upper > 0.0) continue;

    constexpr int kGrid = 256;
    std::vector<double> qs, values;
    qs.reserve(kGrid);
    values.reserve(kGrid);
    bool ok = true;
    for (int i = 1; i <= kGrid; ++i) {
      const double qq = q_lower + (cert.q_upper - q_lower) *
                                      static_cast<double>(i) /
                                      static_cast<double>(kGrid);
      const double bound = (1.0 - tau) + 2.0 * std::sqrt(qq * (1.0 - tau)) -
                           1.0 / (2.0 * cert.k);
      qs.push_back(qq);
      values.push_back(bound);
      if (bound > target + kSlack) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    cert.c_star = c;
    cert.q_lower = q_lower;
    cert.b2_q = std::move(qs);
    cert.b2_values = std::move(values);
    cert.verified = true;
    break;
  }
  return cert;
}

}  // namespace embedgame
