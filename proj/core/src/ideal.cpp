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

#include "embedgame/ideal.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

#include "embedgame/errors.hpp"
#include "embedgame/rng.hpp"

namespace embedgame {

namespace {

constexpr double kBranchCutoff = 1e-15;

double born_probability(const Matrix& element, const Matrix& rho) {
  return std::max(0.0, std::real((element * rho).trace()));
}

Matrix local_projector(const PureState& s) {
  return s.amplitudes * s.amplitudes.adjoint();
}

Answer leaf_answer(int code) {
  switch (code) {
    case AdaptiveProgram::kLeafSame:
      return Answer::kSame;
    case AdaptiveProgram::kLeafDifferent:
      return Answer::kDifferent;
    case AdaptiveProgram::kLeafPass:
      return Answer::kInconclusive;
    default:
      throw ValidationError("not a leaf code");
  }
}

}  // namespace

IdealSession::IdealSession(RegularEmbedding e, int copies, std::uint64_t seed)
    : embedding_(std::move(e)), seed_(seed) {
  if (copies < 1) {
    throw ValidationError("a session needs at least one copy");
  }
  const DensityOp joint = projector(embedding_.joint_state());
  states_.reserve(static_cast<std::size_t>(copies));
  for (int i = 0; i < copies; ++i) states_.push_back(joint);
}

IdealSession IdealSession::challenged(RegularEmbedding e, std::size_t alpha,
                                      std::size_t beta, std::uint64_t seed) {
  const std::size_t nx = e.primitive.x_size();
  if (alpha >= nx || beta >= nx) {
    throw ValidationError("challenge symbol index out of range");
  }
  if (!(e.alice_weights[alpha] > 0.0) || !(e.alice_weights[beta] > 0.0)) {
    throw ValidationError("challenge symbols must carry positive weight");
  }

  IdealSession session(e, 2, seed);
  const std::array<std::size_t, 2> symbol = {alpha, beta};
  for (std::size_t copy = 0; copy < 2; ++copy) {
    const std::size_t x = symbol[copy];
    const PureState pointer =
        PureState::basis({static_cast<int>(nx)}, static_cast<int>(x));
    session.states_[copy] =
        projector(tensor(pointer, session.embedding_.bob_states[x]));
    session.log_.push_back(QueryRecord{
        Party::kAlice, static_cast<int>(copy), "honest", x,
        session.embedding_.primitive.x_alphabet()[x],
        session.embedding_.alice_weights[x]});
  }
  return session;
}

const DensityOp& IdealSession::copy_state(int copy) const {
  if (copy < 0 || copy >= copies()) {
    throw ValidationError("copy index out of range");
  }
  return states_[static_cast<std::size_t>(copy)];
}

QueryRecord IdealSession::honest_query(Party party, int copy) {
  const Primitive& p = embedding_.primitive;
  std::vector<std::string> labels;
  int dim = 0;
  if (party == Party::kAlice) {
    dim = static_cast<int>(p.x_size());
    labels = p.x_alphabet();
  } else {
    dim = embedding_.bob_dim;
    if (dim == static_cast<int>(p.y_size())) labels = p.y_alphabet();
  }
  return query(party, copy, Povm::computational({dim}, labels), "honest");
}

QueryRecord IdealSession::query(Party party, int copy, const Povm& m,
                                const std::string& povm_id) {
  if (copy < 0 || copy >= copies()) {
    throw ValidationError("copy index out of range");
  }
  const int alice_dim = static_cast<int>(embedding_.primitive.x_size());
  const int bob_dim = embedding_.bob_dim;
  const int register_dim = party == Party::kAlice ? alice_dim : bob_dim;
  if (m.dim() != register_dim) {
    throw LocalityViolation(
        "measurement must act on the party's own register of one copy");
  }

  // Extend to the full copy so the other register stays untouched.
  std::vector<Matrix> extended;
  extended.reserve(m.elements.size());
  for (const Matrix& element : m.elements) {
    if (party == Party::kAlice) {
      extended.push_back(kron(element, Matrix::Identity(bob_dim, bob_dim)));
    } else {
      extended.push_back(kron(Matrix::Identity(alice_dim, alice_dim), element));
    }
  }
  Povm full({alice_dim, bob_dim}, std::move(extended), m.labels);

  MeasurementRecord rec =
      measure(states_[static_cast<std::size_t>(copy)], full,
              Rng::child(seed_, draws_++).next_u64());
  states_[static_cast<std::size_t>(copy)] = std::move(rec.residual);

  QueryRecord out{party,           copy,
                  povm_id,         rec.outcome_index,
                  rec.outcome_label, rec.probability};
  log_.push_back(out);
  return out;
}

void validate_program(const AdaptiveProgram& prog, int register_dim) {
  if (prog.nodes.empty()) {
    throw ValidationError("adaptive program needs at least one node");
  }
  const int n = static_cast<int>(prog.nodes.size());
  for (int i = 0; i < n; ++i) {
    const ProgramNode& node = prog.nodes[static_cast<std::size_t>(i)];
    if (node.copy != 0 && node.copy != 1) {
      throw ValidationError("program nodes may only touch copies 0 and 1");
    }
    if (node.povm.dim() != register_dim) {
      throw ValidationError("program POVM does not fit the register");
    }
    if (node.next.size() != node.povm.size()) {
      throw ValidationError("program node needs one edge per outcome");
    }
    for (int code : node.next) {
      if (code >= 0) {
        if (code <= i || code >= n) {
          throw ValidationError("program edges must point forward");
        }
      } else if (code != AdaptiveProgram::kLeafSame &&
                 code != AdaptiveProgram::kLeafDifferent &&
                 code != AdaptiveProgram::kLeafPass) {
        throw ValidationError("unknown leaf code in program");
      }
    }
  }
  // Longest root path; forward edges let a reverse sweep compute it directly.
  std::vector<int> depth(static_cast<std::size_t>(n), 1);
  for (int i = n - 1; i >= 0; --i) {
    for (int code : prog.nodes[static_cast<std::size_t>(i)].next) {
      if (code >= 0) {
        depth[static_cast<std::size_t>(i)] =
            std::max(depth[static_cast<std::size_t>(i)],
                     1 + depth[static_cast<std::size_t>(code)]);
      }
    }
  }
  if (depth[0] > kMaxProgramDepth) {
    throw ValidationError("program exceeds the depth limit");
  }
}

Answer run_program(IdealSession& session, const AdaptiveProgram& prog) {
  if (session.copies() < 2) {
    throw ValidationError("programs expect a two-copy challenged session");
  }
  validate_program(prog, session.embedding().bob_dim);
  int node = 0;
  while (true) {
    const ProgramNode& nd = prog.nodes[static_cast<std::size_t>(node)];
    const QueryRecord rec = session.query(Party::kBob, nd.copy, nd.povm,
                                          "node" + std::to_string(node));
    const int code = nd.next[rec.outcome_index];
    if (code < 0) return leaf_answer(code);
    node = code;
  }
}

PayoffReport evaluate_program(const AdaptiveProgram& prog,
                              const PureState& psi0, const PureState& psi1,
                              double c) {
  if (psi0.dims != psi1.dims) {
    throw ValidationError("challenge states must share dimensions");
  }
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  validate_program(prog, psi0.dim());

  std::vector<std::vector<Matrix>> roots(prog.nodes.size());
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    for (const Matrix& element : prog.nodes[i].povm.elements) {
      roots[i].push_back(hermitian_sqrt(element));
    }
  }

  double q_c = 0.0, q_err = 0.0;
  const std::array<const PureState*, 2> psi = {&psi0, &psi1};
  std::function<void(int, const Matrix&, const Matrix&, double, bool)> walk =
      [&](int node, const Matrix& rho0, const Matrix& rho1, double mass,
          bool same) {
        const ProgramNode& nd = prog.nodes[static_cast<std::size_t>(node)];
        const Matrix& rho = nd.copy == 0 ? rho0 : rho1;
        for (std::size_t k = 0; k < nd.next.size(); ++k) {
          const double p = born_probability(nd.povm.elements[k], rho);
          const double branch = mass * p;
          if (branch < kBranchCutoff) continue;
          const int code = nd.next[k];
          if (code < 0) {
            if (code == AdaptiveProgram::kLeafPass) continue;
            q_c += branch;
            const bool answered_same = code == AdaptiveProgram::kLeafSame;
            if (answered_same != same) q_err += branch;
            continue;
          }
          const Matrix& root = roots[static_cast<std::size_t>(node)][k];
          const Matrix updated = (root * rho * root) / p;
          if (nd.copy == 0) {
            walk(code, updated, rho1, branch, same);
          } else {
            walk(code, rho0, updated, branch, same);
          }
        }
      };

  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      walk(0, local_projector(*psi[a]), local_projector(*psi[b]), 0.25,
           a == b);
    }
  }

  PayoffReport report;
  report.q_c = q_c;
  report.q_err = std::min(q_err, q_c);
  report.payoff = expected_payoff(report.q_c, report.q_err, c);
  return report;
}

PayoffReport run_restricted_adversary(const RegularEmbedding& e,
                                      const std::string& x0,
                                      const std::string& x1,
                                      const AdaptiveProgram& prog, double c,
                                      std::uint64_t trials,
                                      std::uint64_t seed) {
  if (trials == 0) throw ValidationError("trial count must be positive");
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  const std::size_t i0 = e.primitive.x_index(x0);
  const std::size_t i1 = e.primitive.x_index(x1);
  if (i0 == i1) throw ValidationError("challenge symbols must be distinct");
  validate_program(prog, e.bob_dim);

  std::vector<std::vector<Matrix>> roots(prog.nodes.size());
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    for (const Matrix& element : prog.nodes[i].povm.elements) {
      roots[i].push_back(hermitian_sqrt(element));
    }
  }
  const std::array<Matrix, 2> challenge = {
      local_projector(e.bob_states[i0]), local_projector(e.bob_states[i1])};

  struct ChunkCounts {
    std::uint64_t correct = 0;
    std::uint64_t wrong = 0;
    std::array<std::uint64_t, 4> cells{};
  };
  constexpr int kChunks = 64;
  std::array<ChunkCounts, kChunks> partial{};
  const std::uint64_t n = trials;

  auto run_chunk = [&](int chunk) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(chunk) / kChunks;
    const std::uint64_t end =
        n * (static_cast<std::uint64_t>(chunk) + 1) / kChunks;
    ChunkCounts counts;
    std::vector<double> probs;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = Rng::child(seed, t);
      const std::size_t a = rng.next_u64() & 1;
      const std::size_t b = rng.next_u64() & 1;
      ++counts.cells[a * 2 + b];
      std::array<Matrix, 2> rho = {challenge[a], challenge[b]};

      int node = 0;
      int answer = -1;
      while (answer < 0) {
        const ProgramNode& nd = prog.nodes[static_cast<std::size_t>(node)];
        const std::size_t copy = static_cast<std::size_t>(nd.copy);
        probs.clear();
        for (const Matrix& element : nd.povm.elements) {
          probs.push_back(born_probability(element, rho[copy]));
        }
        std::size_t k = rng.pick(probs);
        if (probs[k] < 1e-12) {
          // The sampler can only land here through roundoff at the very tail
          // of the cumulative sums; take the likeliest outcome instead.
          k = static_cast<std::size_t>(
              std::max_element(probs.begin(), probs.end()) - probs.begin());
        }
        const int code = nd.next[k];
        if (code < 0) {
          answer = -code;  // 1 same, 2 different, 3 pass
          break;
        }
        const Matrix& root = roots[static_cast<std::size_t>(node)][k];
        rho[copy] = (root * rho[copy] * root) / probs[k];
        node = code;
      }

      if (answer == -AdaptiveProgram::kLeafPass) continue;
      const bool answered_same = answer == -AdaptiveProgram::kLeafSame;
      if (answered_same == (a == b)) {
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
    for (std::size_t k = 0; k < 4; ++k) total.cells[k] += counts.cells[k];
  }

  PayoffReport report;
  report.trials = n;
  report.challenge_counts = total.cells;
  const double denom = static_cast<double>(n);
  report.q_c = static_cast<double>(total.correct + total.wrong) / denom;
  report.q_err = static_cast<double>(total.wrong) / denom;
  report.payoff = (static_cast<double>(total.correct) -
                   c * static_cast<double>(total.wrong)) /
                  denom;
  if (n > 1) {
    const double second = (static_cast<double>(total.correct) +
                           c * c * static_cast<double>(total.wrong)) /
                          denom;
    const double var =
        std::max(0.0, second - report.payoff * report.payoff) * denom /
        (denom - 1.0);
    report.std_error = std::sqrt(var / denom);
  }
  return report;
}

AdaptiveProgram random_adaptive_program(const PureState& psi0,
                                        const PureState& psi1, double c,
                                        int max_depth, std::uint64_t seed) {
  if (psi0.dims != psi1.dims) {
    throw ValidationError("challenge states must share dimensions");
  }
  if (!(c > 0.0)) throw ValidationError("penalty must be positive");
  max_depth = std::clamp(max_depth, 1, kMaxProgramDepth);
  const int d = psi0.dim();

  Rng rng(seed);
  auto random_povm = [&] {
    while (true) {
      const std::size_t outcomes = 2 + (rng.next_u64() % 2);
      std::vector<Matrix> raw;
      Matrix sum = Matrix::Zero(d, d);
      for (std::size_t i = 0; i < outcomes; ++i) {
        Matrix g(d, d);
        for (int r = 0; r < d; ++r) {
          for (int col = 0; col < d; ++col) {
            g(r, col) = Complex(rng.next_gaussian(), rng.next_gaussian());
          }
        }
        raw.push_back(g * g.adjoint());
        sum += raw.back();
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
      if (es.eigenvalues()(0) < 1e-9) continue;
      const Matrix w = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().adjoint();
      std::vector<Matrix> elements;
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        elements.push_back(w * raw[i] * w);
        labels.push_back(std::to_string(i));
      }
      return Povm({d}, std::move(elements), std::move(labels));
    }
  };

  AdaptiveProgram prog;
  // Parents are pushed before their children, so edges point forward; nodes
  // are re-addressed by index because the vector may reallocate.
  std::function<int(int)> build = [&](int depth) {
    const int idx = static_cast<int>(prog.nodes.size());
    const int copy = static_cast<int>(rng.next_u64() & 1);
    Povm povm = random_povm();
    std::vector<int> next(povm.size(), AdaptiveProgram::kLeafPass);
    prog.nodes.push_back(ProgramNode{copy, std::move(povm), std::move(next)});
    const std::size_t outcomes =
        prog.nodes[static_cast<std::size_t>(idx)].next.size();
    for (std::size_t k = 0; k < outcomes; ++k) {
      const bool leaf = depth + 1 >= max_depth || prog.nodes.size() >= 64 ||
                        rng.next_u64() % 3 == 0;
      if (!leaf) {
        const int child = build(depth + 1);
        prog.nodes[static_cast<std::size_t>(idx)].next[k] = child;
      }
    }
    return idx;
  };
  build(0);

  // Cell-wise optimal leaves: walk the tree per challenge and accumulate the
  // mass reaching each (node, outcome) leaf slot, split by ground truth.
  std::vector<std::vector<std::array<double, 2>>> reach(prog.nodes.size());
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    reach[i].assign(prog.nodes[i].next.size(), {0.0, 0.0});
  }
  std::vector<std::vector<Matrix>> roots(prog.nodes.size());
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    for (const Matrix& element : prog.nodes[i].povm.elements) {
      roots[i].push_back(hermitian_sqrt(element));
    }
  }
  std::function<void(int, const Matrix&, const Matrix&, double, bool)> walk =
      [&](int node, const Matrix& rho0, const Matrix& rho1, double mass,
          bool same) {
        const ProgramNode& nd = prog.nodes[static_cast<std::size_t>(node)];
        const Matrix& rho = nd.copy == 0 ? rho0 : rho1;
        for (std::size_t k = 0; k < nd.next.size(); ++k) {
          const double p = born_probability(nd.povm.elements[k], rho);
          const double branch = mass * p;
          if (branch < kBranchCutoff) continue;
          if (nd.next[k] < 0) {
            reach[static_cast<std::size_t>(node)][k][same ? 0 : 1] += branch;
            continue;
          }
          const Matrix& root = roots[static_cast<std::size_t>(node)][k];
          const Matrix updated = (root * rho * root) / p;
          if (nd.copy == 0) {
            walk(nd.next[k], updated, rho1, branch, same);
          } else {
            walk(nd.next[k], rho0, updated, branch, same);
          }
        }
      };
  const std::array<const PureState*, 2> psi = {&psi0, &psi1};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      walk(0, local_projector(*psi[a]), local_projector(*psi[b]), 0.25,
           a == b);
    }
  }
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    for (std::size_t k = 0; k < prog.nodes[i].next.size(); ++k) {
      if (prog.nodes[i].next[k] >= 0) continue;
      const double p_same = reach[i][k][0];
      const double p_diff = reach[i][k][1];
      const double gain_same = p_same - c * p_diff;
      const double gain_diff = p_diff - c * p_same;
      if (gain_same <= 0.0 && gain_diff <= 0.0) {
        prog.nodes[i].next[k] = AdaptiveProgram::kLeafPass;
      } else if (gain_same >= gain_diff) {
        prog.nodes[i].next[k] = AdaptiveProgram::kLeafSame;
      } else {
        prog.nodes[i].next[k] = AdaptiveProgram::kLeafDifferent;
      }
    }
  }

  validate_program(prog, d);
  return prog;
}

}  // namespace embedgame
