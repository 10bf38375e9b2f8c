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

#include "embedgame/primitive.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "embedgame/errors.hpp"
#include "embedgame/rng.hpp"

namespace embedgame {

namespace {

// H(p) in bits for an (unvalidated) sub-distribution; 0 log 0 = 0.
double entropy_terms(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

}  // namespace

Primitive::Primitive(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                     std::vector<std::vector<double>> probs)
    : x_labels_(std::move(x_labels)), y_labels_(std::move(y_labels)), probs_(std::move(probs)) {
  if (x_labels_.empty() || y_labels_.empty()) {
    throw ValidationError("primitive: alphabets must be non-empty");
  }
  const std::set<std::string> xs(x_labels_.begin(), x_labels_.end());
  const std::set<std::string> ys(y_labels_.begin(), y_labels_.end());
  if (xs.size() != x_labels_.size() || ys.size() != y_labels_.size()) {
    throw ValidationError("primitive: labels must be unique");
  }
  if (probs_.size() != x_labels_.size()) {
    throw ValidationError("primitive: probability matrix must have one row per x label");
  }
  double total = 0.0;
  for (const auto& row : probs_) {
    if (row.size() != y_labels_.size()) {
      throw ValidationError("primitive: probability matrix must have one column per y label");
    }
    for (double v : row) {
      if (!(v >= 0.0)) throw ValidationError("primitive: probabilities must be >= 0");
      total += v;
    }
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw ValidationError("primitive: probabilities must sum to 1 within 1e-12");
  }
}

std::vector<double> Primitive::x_marginal() const {
  std::vector<double> m(x_size(), 0.0);
  for (std::size_t x = 0; x < x_size(); ++x) {
    for (double v : probs_[x]) m[x] += v;
  }
  return m;
}

std::vector<double> Primitive::y_marginal() const {
  std::vector<double> m(y_size(), 0.0);
  for (const auto& row : probs_) {
    for (std::size_t y = 0; y < y_size(); ++y) m[y] += row[y];
  }
  return m;
}

std::vector<double> Primitive::row_conditional(std::size_t x) const {
  std::vector<double> row = probs_[x];
  double px = 0.0;
  for (double v : row) px += v;
  if (px > 0.0) {
    for (double& v : row) v /= px;
  } else {
    std::fill(row.begin(), row.end(), 0.0);
  }
  return row;
}

Primitive Primitive::transposed() const {
  std::vector<std::vector<double>> t(y_size(), std::vector<double>(x_size(), 0.0));
  for (std::size_t x = 0; x < x_size(); ++x) {
    for (std::size_t y = 0; y < y_size(); ++y) t[y][x] = probs_[x][y];
  }
  return Primitive(y_labels_, x_labels_, std::move(t));
}

std::size_t Primitive::x_index(const std::string& label) const {
  const auto it = std::find(x_labels_.begin(), x_labels_.end(), label);
  if (it == x_labels_.end()) throw ValidationError("primitive: unknown x label '" + label + "'");
  return static_cast<std::size_t>(it - x_labels_.begin());
}

double shannon_entropy(std::span<const double> dist) {
  double total = 0.0;
  for (double v : dist) {
    if (v < -kProbabilitySumTol) {
      throw ValidationError("shannon_entropy: negative probability");
    }
    total += v > 0.0 ? v : 0.0;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw ValidationError("shannon_entropy: distribution must sum to 1 within 1e-12");
  }
  return entropy_terms(dist);
}

DependentPartMap dependent_part(const Primitive& p) {
  DependentPartMap map;
  map.class_of.assign(p.x_size(), DependentPartMap::kNullClass);
  const std::vector<double> px = p.x_marginal();
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    if (px[x] <= 0.0) continue;  // reserved null class
    const std::vector<double> row = p.row_conditional(x);
    int cls = -1;
    for (int k = 0; k < map.num_classes(); ++k) {
      if (total_variation(row, map.class_conditional[k]) <= kRowEqualityTol) {
        cls = k;
        break;
      }
    }
    if (cls < 0) {
      cls = map.num_classes();
      map.class_conditional.push_back(row);
    }
    map.class_of[x] = cls;
  }
  return map;
}

namespace {

// Joint distribution of (row-class, Y); zero-probability rows contribute
// nothing. Rows: one per class.
std::vector<std::vector<double>> class_joint(const Primitive& p, const DependentPartMap& dp) {
  std::vector<std::vector<double>> j(dp.class_conditional.size(),
                                     std::vector<double>(p.y_size(), 0.0));
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    const int g = dp.class_of[x];
    if (g == DependentPartMap::kNullClass) continue;
    for (std::size_t y = 0; y < p.y_size(); ++y) j[g][y] += p.prob(x, y);
  }
  return j;
}

double joint_entropy(const std::vector<std::vector<double>>& j) {
  double h = 0.0;
  for (const auto& row : j) h += entropy_terms(row);
  return h;
}

}  // namespace

EntropyReport entropy_report(const Primitive& p) {
  EntropyReport r;
  const std::vector<double> px = p.x_marginal();
  const std::vector<double> py = p.y_marginal();
  r.h_x = entropy_terms(px);
  r.h_y = entropy_terms(py);
  const double h_xy = joint_entropy(p.joint());
  r.h_x_given_y = h_xy - r.h_y;
  r.h_y_given_x = h_xy - r.h_x;
  r.i_xy = r.h_x + r.h_y - h_xy;

  // H(class | Y) = H(class, Y) - H(Y), and mirrored for the other side.
  const auto j_xy = class_joint(p, dependent_part(p));
  r.h_dep_xy_given_y = joint_entropy(j_xy) - r.h_y;

  const Primitive t = p.transposed();
  const auto j_yx = class_joint(t, dependent_part(t));
  r.h_dep_yx_given_x = joint_entropy(j_yx) - r.h_x;
  return r;
}

bool is_trivial_primitive(const Primitive& p) {
  const EntropyReport r = entropy_report(p);
  const bool sender_side = r.h_dep_xy_given_y <= kEntropyTol;
  const bool receiver_side = r.h_dep_yx_given_x <= kEntropyTol;
  if (sender_side != receiver_side) {
    throw ValidationError(
        "is_trivial_primitive: the two triviality criteria disagree; "
        "the distribution is too close to the tolerance boundary");
  }
  return sender_side;
}

std::pair<std::string, std::string> classical_hbc_sample(const Primitive& p,
                                                         std::uint64_t seed) {
  const DependentPartMap dp = dependent_part(p);
  const std::vector<double> px = p.x_marginal();

  // Class weights P(class) = sum of member sender probabilities.
  std::vector<double> w(dp.class_conditional.size(), 0.0);
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    if (dp.class_of[x] != DependentPartMap::kNullClass) w[dp.class_of[x]] += px[x];
  }

  Rng rng(seed);
  const std::size_t g = rng.pick(w);
  const std::size_t y = rng.pick(dp.class_conditional[g]);

  // Sender draws a symbol within the announced class.
  std::vector<double> in_class(p.x_size(), 0.0);
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    if (dp.class_of[x] == static_cast<int>(g)) in_class[x] = px[x];
  }
  const std::size_t x = rng.pick(in_class);
  return {p.x_alphabet()[x], p.y_alphabet()[y]};
}

}  // namespace embedgame
