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

#include "embedgame/serialize.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "embedgame/errors.hpp"

namespace embedgame {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ValidationError("malformed JSON");
  return j;
}

double number_field(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    double out = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec == std::errc() && ptr == last) return out;
    throw ValidationError(std::string("field '") + what +
                          "' is not a decimal number");
  }
  throw ValidationError(std::string("field '") + what +
                        "' must be a number or a decimal string");
}

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::vector<std::string> string_list(const json& v, const char* what) {
  if (!v.is_array()) {
    throw ValidationError(std::string("field '") + what +
                          "' must be an array");
  }
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_string()) {
      throw ValidationError(std::string("field '") + what +
                            "' must hold strings");
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

json double_json(double v) { return json(v); }

json primitive_json(const Primitive& p) {
  json rows = json::array();
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < p.y_size(); ++y) {
      row.push_back(double_json(p.prob(x, y)));
    }
    rows.push_back(std::move(row));
  }
  return json{{"x", p.x_alphabet()}, {"y", p.y_alphabet()}, {"p", rows}};
}

Primitive primitive_from(const json& j) {
  const std::vector<std::string> xs = string_list(require(j, "x"), "x");
  const std::vector<std::string> ys = string_list(require(j, "y"), "y");
  const json& rows = require(j, "p");
  if (!rows.is_array()) throw ValidationError("field 'p' must be an array");
  std::vector<std::vector<double>> probs;
  probs.reserve(rows.size());
  for (const json& row : rows) {
    if (!row.is_array()) {
      throw ValidationError("field 'p' must hold arrays of entries");
    }
    std::vector<double> out;
    out.reserve(row.size());
    for (const json& v : row) out.push_back(number_field(v, "p"));
    probs.push_back(std::move(out));
  }
  return Primitive(xs, ys, probs);
}

json pure_state_json(const PureState& s) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
    amps.push_back(json::array(
        {double_json(s.amplitudes(i).real()), double_json(s.amplitudes(i).imag())}));
  }
  return json{{"dims", s.dims}, {"amplitudes", amps}};
}

PureState pure_state_from(const json& j) {
  const json& dims_json = require(j, "dims");
  if (!dims_json.is_array()) {
    throw ValidationError("field 'dims' must be an array");
  }
  std::vector<int> dims;
  for (const json& d : dims_json) {
    if (!d.is_number_integer()) {
      throw ValidationError("field 'dims' must hold integers");
    }
    dims.push_back(d.get<int>());
  }
  const json& amps = require(j, "amplitudes");
  if (!amps.is_array()) {
    throw ValidationError("field 'amplitudes' must be an array");
  }
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const json& pair : amps) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ValidationError("amplitudes must be [re, im] pairs");
    }
    v(i++) = Complex(number_field(pair[0], "amplitudes"),
                     number_field(pair[1], "amplitudes"));
  }
  return PureState(std::move(dims), std::move(v));
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw ValidationError("value does not format");
  return std::string(buf.data(), ptr);
}

std::string to_json(const Primitive& p) { return primitive_json(p).dump(2); }

Primitive primitive_from_json(const std::string& text) {
  return primitive_from(parse(text));
}

std::string to_json(const PureState& s) { return pure_state_json(s).dump(2); }

PureState pure_state_from_json(const std::string& text) {
  return pure_state_from(parse(text));
}

std::string to_json(const RegularEmbedding& e) {
  json states = json::array();
  for (const PureState& s : e.bob_states) states.push_back(pure_state_json(s));
  json phases = json::array();
  for (const auto& row : e.phases) {
    json r = json::array();
    for (double v : row) r.push_back(double_json(v));
    phases.push_back(std::move(r));
  }
  json j{{"primitive", primitive_json(e.primitive)},
         {"bob_dim", e.bob_dim},
         {"weights", e.alice_weights},
         {"states", states},
         {"phases", phases}};
  return j.dump(2);
}

RegularEmbedding embedding_from_json(const std::string& text) {
  const json j = parse(text);
  Primitive p = primitive_from(require(j, "primitive"));
  const json& bd = require(j, "bob_dim");
  if (!bd.is_number_integer()) {
    throw ValidationError("field 'bob_dim' must be an integer");
  }
  const int bob_dim = bd.get<int>();
  const json& wj = require(j, "weights");
  if (!wj.is_array()) throw ValidationError("field 'weights' must be an array");
  std::vector<double> weights;
  for (const json& w : wj) weights.push_back(number_field(w, "weights"));
  const json& sj = require(j, "states");
  if (!sj.is_array()) throw ValidationError("field 'states' must be an array");
  std::vector<PureState> states;
  for (const json& s : sj) states.push_back(pure_state_from(s));
  std::vector<std::vector<double>> phases;
  if (const auto it = j.find("phases"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ValidationError("field 'phases' must be an array");
    }
    for (const json& row : *it) {
      if (!row.is_array()) {
        throw ValidationError("field 'phases' must hold arrays");
      }
      std::vector<double> r;
      for (const json& v : row) r.push_back(number_field(v, "phases"));
      phases.push_back(std::move(r));
    }
  }
  return RegularEmbedding(std::move(p), bob_dim, std::move(weights),
                          std::move(states), std::move(phases));
}

std::string to_json(const GapCertificate& cert) {
  json j{{"tau", cert.tau},
         {"k", cert.k},
         {"f_tau", cert.f_tau},
         {"p_max", cert.p_max},
         {"c_star", cert.c_star},
         {"b0", cert.b0},
         {"b1", cert.b1},
         {"q_lower", cert.q_lower},
         {"q_upper", cert.q_upper},
         {"b2_q", cert.b2_q},
         {"b2_values", cert.b2_values},
         {"verified", cert.verified}};
  return j.dump(2);
}

std::string to_json(const EigenAsymptoticsReport& report) {
  json j{{"c_grid", report.c_grid},
         {"overlap_sq", report.overlap_sq},
         {"second_eigenvalue", report.second_eigenvalue},
         {"fitted_kappa", report.fitted_kappa}};
  return j.dump(2);
}

std::string to_json(const PayoffReport& report) {
  json j{{"q_c", report.q_c},
         {"q_err", report.q_err},
         {"payoff", report.payoff},
         {"abort_prob", report.abort_prob},
         {"stderr", report.std_error},
         {"trials", report.trials},
         {"challenge_counts", report.challenge_counts}};
  return j.dump(2);
}

std::string to_json(const std::vector<QueryRecord>& log) {
  json rows = json::array();
  for (const QueryRecord& r : log) {
    rows.push_back(json{{"party", r.party == Party::kAlice ? "alice" : "bob"},
                        {"copy", r.copy},
                        {"povm_id", r.povm_id},
                        {"outcome_index", r.outcome_index},
                        {"outcome", r.outcome_label},
                        {"probability", r.probability}});
  }
  return rows.dump(2);
}

std::string eigenvalues_csv(const DensityOp& rho) {
  const Eigen::VectorXd evals = hermitian_eigenvalues(rho.matrix);
  std::string out = "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(evals(i));
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ValidationError("cannot read file: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw ValidationError("cannot write file: " + path);
}

}  // namespace embedgame
