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
// Command line front end. Exit codes: 0 success, 1 operational failure
// (certificate not verified, solver stall), 2 usage or input errors.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "embedgame/discrimination.hpp"
#include "embedgame/embedding.hpp"
#include "embedgame/errors.hpp"
#include "embedgame/game.hpp"
#include "embedgame/primitive.hpp"
#include "embedgame/serialize.hpp"
#include "embedgame/version.hpp"

namespace {

using embedgame::format_double;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    embedgame::write_text_file(out_path,
                               text.empty() || text.back() == '\n'
                                   ? text
                                   : text + '\n');
  }
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += fields[i];
  }
  row += '\n';
  return row;
}

embedgame::ComparisonStrategy make_strategy(const std::string& name,
                                            const embedgame::PureState& psi0,
                                            const embedgame::PureState& psi1) {
  if (name == "coherent") {
    return embedgame::coherent_optimal_comparison(psi0, psi1);
  }
  if (name == "product") {
    return embedgame::separable_product_strategy(psi0, psi1);
  }
  if (name == "blind") {
    std::vector<int> dims = psi0.dims;
    dims.insert(dims.end(), psi0.dims.begin(), psi0.dims.end());
    return embedgame::blind_guess_strategy(dims);
  }
  throw embedgame::ValidationError("unknown strategy: " + name);
}

// --- primitive analyze -----------------------------------------------------

int cmd_primitive_analyze(const std::string& file, const std::string& format,
                          const std::string& out) {
  const embedgame::Primitive p =
      embedgame::primitive_from_json(embedgame::read_text_file(file));
  const embedgame::EntropyReport rep = embedgame::entropy_report(p);
  const embedgame::DependentPartMap dep = embedgame::dependent_part(p);
  const bool trivial = embedgame::is_trivial_primitive(p);

  if (format == "json") {
    json classes = json::array();
    for (int k = 0; k < dep.num_classes(); ++k) {
      json members = json::array();
      for (std::size_t x = 0; x < dep.class_of.size(); ++x) {
        if (dep.class_of[x] == k) members.push_back(p.x_alphabet()[x]);
      }
      classes.push_back(members);
    }
    const json j{{"h_x", rep.h_x},
                 {"h_y", rep.h_y},
                 {"h_x_given_y", rep.h_x_given_y},
                 {"h_y_given_x", rep.h_y_given_x},
                 {"i_xy", rep.i_xy},
                 {"h_dep_xy_given_y", rep.h_dep_xy_given_y},
                 {"h_dep_yx_given_x", rep.h_dep_yx_given_x},
                 {"classes", classes},
                 {"trivial", trivial},
                 {"version", std::string(embedgame::kVersion)}};
    emit(j.dump(2), out);
    return kOk;
  }

  std::string text;
  text += "H(X) = " + format_double(rep.h_x) + "\n";
  text += "H(Y) = " + format_double(rep.h_y) + "\n";
  text += "H(X|Y) = " + format_double(rep.h_x_given_y) + "\n";
  text += "H(Y|X) = " + format_double(rep.h_y_given_x) + "\n";
  text += "I(X;Y) = " + format_double(rep.i_xy) + "\n";
  text += "H(dep X|Y) = " + format_double(rep.h_dep_xy_given_y) + "\n";
  text += "H(dep Y|X) = " + format_double(rep.h_dep_yx_given_x) + "\n";
  for (int k = 0; k < dep.num_classes(); ++k) {
    text += "class " + std::to_string(k) + ":";
    for (std::size_t x = 0; x < dep.class_of.size(); ++x) {
      if (dep.class_of[x] == k) text += " " + p.x_alphabet()[x];
    }
    text += "\n";
  }
  text += std::string("trivial: ") + (trivial ? "yes" : "no") + "\n";
  emit(text, out);
  return kOk;
}

// --- embed ------------------------------------------------------------------

int cmd_embed_build(const std::string& file, const std::string& out) {
  const embedgame::Primitive p =
      embedgame::primitive_from_json(embedgame::read_text_file(file));
  const embedgame::RegularEmbedding e = embedgame::build_regular_embedding(p);
  emit(embedgame::to_json(e), out);
  return kOk;
}

int cmd_embed_classify(const std::string& file, const std::string& out) {
  const embedgame::RegularEmbedding e =
      embedgame::embedding_from_json(embedgame::read_text_file(file));
  const embedgame::EmbeddingClassification cls =
      embedgame::classify_embedding(e);
  const bool correct = embedgame::check_correct(e, e.primitive);
  const json j{
      {"s_dep_xy_given_b", cls.s_dep_xy_given_b},
      {"s_dep_yx_given_a", cls.s_dep_yx_given_a},
      {"verdict", cls.verdict == embedgame::EmbeddingVerdict::kTrivial
                      ? "trivial"
                      : "nontrivial"},
      {"correct", correct},
      {"version", std::string(embedgame::kVersion)}};
  emit(j.dump(2), out);
  return kOk;
}

// --- bounds ------------------------------------------------------------------

int cmd_bounds_table(std::vector<double> taus, double tau_min, double tau_max,
                     int steps, const std::string& out) {
  if (taus.empty()) {
    if (steps < 1) throw embedgame::ValidationError("steps must be >= 1");
    for (int i = 0; i < steps; ++i) {
      const double t =
          steps == 1 ? tau_min
                     : tau_min + (tau_max - tau_min) * i / (steps - 1);
      taus.push_back(t);
    }
  }
  std::string csv = "tau,idp_qc_max,helstrom_qerr_min,seed,version\n";
  for (double tau : taus) {
    const embedgame::DiscriminationBounds b =
        embedgame::discrimination_bounds(tau);
    csv += csv_row({format_double(b.tau), format_double(b.idp_qc_max),
                    format_double(b.helstrom_qerr_min), "0",
                    std::string(embedgame::kVersion)});
  }
  emit(csv, out);
  return kOk;
}

// --- game -------------------------------------------------------------------

const char* kGameCsvHeader =
    "tau,c,strategy,q_c,q_err,payoff,abort_prob,stderr,trials,seed,version\n";

std::string game_csv_row(double tau, double c, const std::string& strategy,
                         const embedgame::PayoffReport& r, std::uint64_t seed) {
  return csv_row({format_double(tau), format_double(c), strategy,
                  format_double(r.q_c), format_double(r.q_err),
                  format_double(r.payoff), format_double(r.abort_prob),
                  format_double(r.std_error), std::to_string(r.trials),
                  std::to_string(seed), std::string(embedgame::kVersion)});
}

int cmd_game_scan(const std::vector<double>& taus, double c, bool c_given,
                  const std::vector<std::string>& strategies,
                  const std::string& out) {
  std::string csv =
      "tau,c,strategy,q_c,q_err,payoff,k,f_tau,c_star,seed,version\n";
  for (double tau : taus) {
    // Also guards the domain: overlaps outside [0.01, 0.99] are rejected.
    const embedgame::GapCertificate cert = embedgame::gap_certificate(tau);
    const double c_used = c_given ? c : cert.c_star;
    const double s = std::sqrt(1.0 - tau * tau);
    embedgame::Vector a0(2), a1(2);
    a0 << 1.0, 0.0;
    a1 << tau, s;
    const embedgame::PureState psi0({2}, a0), psi1({2}, a1);
    embedgame::ComparisonStates states;
    states.same = {embedgame::tensor(psi0, psi0), embedgame::tensor(psi1, psi1)};
    states.different = {embedgame::tensor(psi0, psi1),
                        embedgame::tensor(psi1, psi0)};
    for (const std::string& name : strategies) {
      const embedgame::ComparisonStrategy strat =
          make_strategy(name, psi0, psi1);
      const embedgame::PayoffReport rep =
          embedgame::evaluate_strategy(strat, states, c_used);
      csv += csv_row({format_double(tau), format_double(c_used), name,
                      format_double(rep.q_c), format_double(rep.q_err),
                      format_double(rep.payoff), format_double(cert.k),
                      format_double(cert.f_tau), format_double(cert.c_star),
                      "0", std::string(embedgame::kVersion)});
    }
  }
  emit(csv, out);
  return kOk;
}

int cmd_game_simulate(const std::string& file, const std::string& x0,
                      const std::string& x1, double c, int copies,
                      std::uint64_t trials, std::uint64_t seed,
                      const std::string& strategy_name, const std::string& format,
                      const std::string& out) {
  const embedgame::RegularEmbedding e =
      embedgame::embedding_from_json(embedgame::read_text_file(file));
  const std::size_t i0 = e.primitive.x_index(x0);
  const std::size_t i1 = e.primitive.x_index(x1);
  const embedgame::PureState& psi0 = e.bob_states[i0];
  const embedgame::PureState& psi1 = e.bob_states[i1];

  embedgame::GameConfig cfg;
  cfg.x0 = x0;
  cfg.x1 = x1;
  cfg.tau = embedgame::overlap(psi0, psi1);
  cfg.c = c;
  cfg.copies = copies;
  cfg.trials = trials;
  cfg.seed = seed;

  const embedgame::ComparisonStrategy strat =
      make_strategy(strategy_name, psi0, psi1);
  const embedgame::PayoffReport rep =
      embedgame::simulate_protocol(e, cfg, strat);

  if (format == "json") {
    emit(embedgame::to_json(rep), out);
  } else {
    emit(std::string(kGameCsvHeader) +
             game_csv_row(cfg.tau, c, strategy_name, rep, seed),
         out);
  }
  return kOk;
}

int cmd_game_search(double tau, double c, std::uint64_t budget,
                    std::uint64_t seed, const std::string& out) {
  const embedgame::SeparableSearchResult res =
      embedgame::separable_search(tau, c, budget, seed);
  std::string csv = "tau,c,budget,q_c,q_err,payoff,seed,version\n";
  csv += csv_row({format_double(res.tau), format_double(res.c),
                  std::to_string(res.budget), format_double(res.best.q_c),
                  format_double(res.best.q_err),
                  format_double(res.best.payoff), std::to_string(res.seed),
                  std::string(embedgame::kVersion)});
  emit(csv, out);
  return kOk;
}

// --- certify ------------------------------------------------------------------

int cmd_certify(const std::vector<double>& taus, std::uint64_t budget,
                std::uint64_t seed, const std::string& format,
                const std::string& out) {
  // Each overlap gets its certificate plus an adversarial search at the
  // certified penalty; the pair passes when the certificate verifies and the
  // search stays below the certified ceiling.
  struct Entry {
    embedgame::GapCertificate cert;
    embedgame::SeparableSearchResult search;
    bool pass = false;
  };
  std::vector<Entry> entries;
  bool all_pass = true;
  for (double tau : taus) {
    Entry entry;
    entry.cert = embedgame::gap_certificate(tau);
    entry.search =
        embedgame::separable_search(tau, entry.cert.c_star, budget, seed);
    entry.pass = entry.cert.verified &&
                 entry.search.best.payoff <=
                     entry.cert.p_max - entry.cert.f_tau + 1e-9;
    all_pass = all_pass && entry.pass;
    entries.push_back(std::move(entry));
  }

  if (format == "csv") {
    std::string csv =
        "tau,c_star,k,f_tau,p_max,b0,b1,q_lower,q_upper,verified,"
        "search_payoff,pass,budget,seed,version\n";
    for (const Entry& entry : entries) {
      const embedgame::GapCertificate& cert = entry.cert;
      csv += csv_row({format_double(cert.tau), format_double(cert.c_star),
                      format_double(cert.k), format_double(cert.f_tau),
                      format_double(cert.p_max), format_double(cert.b0),
                      format_double(cert.b1), format_double(cert.q_lower),
                      format_double(cert.q_upper),
                      cert.verified ? "true" : "false",
                      format_double(entry.search.best.payoff),
                      entry.pass ? "true" : "false", std::to_string(budget),
                      std::to_string(seed),
                      std::string(embedgame::kVersion)});
    }
    emit(csv, out);
  } else {
    json arr = json::array();
    for (const Entry& entry : entries) {
      json j = json::parse(embedgame::to_json(entry.cert));
      j["search"] = json{{"q_c", entry.search.best.q_c},
                         {"q_err", entry.search.best.q_err},
                         {"payoff", entry.search.best.payoff}};
      j["pass"] = entry.pass;
      arr.push_back(std::move(j));
    }
    const json top{{"results", arr},
                   {"all_pass", all_pass},
                   {"budget", budget},
                   {"seed", seed},
                   {"version", std::string(embedgame::kVersion)}};
    emit(top.dump(2), out);
  }
  return all_pass ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-party embedding analyzer and comparison-game toolkit"};
  app.require_subcommand(1);

  std::string file, out, format = "text";
  std::string x0, x1, strategy = "coherent";
  std::vector<double> taus;
  double tau = 0.5, c = 3.0, tau_min = 0.05, tau_max = 0.95;
  int steps = 19, copies = 4;
  std::uint64_t trials = 10000, seed = 0, budget = 10000;

  // primitive analyze
  CLI::App* primitive = app.add_subcommand("primitive", "primitive analysis");
  primitive->require_subcommand(1);
  CLI::App* analyze = primitive->add_subcommand(
      "analyze", "entropy report, row classes, triviality");
  analyze->add_option("file", file, "primitive JSON file")->required();
  analyze->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--out", out, "write output to a file");

  // embed build / classify
  CLI::App* embed = app.add_subcommand("embed", "embedding operations");
  embed->require_subcommand(1);
  CLI::App* build = embed->add_subcommand(
      "build", "canonical regular embedding of a primitive");
  build->add_option("file", file, "primitive JSON file")->required();
  build->add_option("--out", out, "write output to a file");
  CLI::App* classify = embed->add_subcommand(
      "classify", "entropy classification of an embedding");
  classify->add_option("file", file, "embedding JSON file")->required();
  classify->add_option("--out", out, "write output to a file");

  // bounds table
  CLI::App* bounds = app.add_subcommand("bounds", "discrimination limits");
  bounds->require_subcommand(1);
  CLI::App* table = bounds->add_subcommand("table", "CSV of closed-form bounds");
  table->add_option("--tau", taus, "explicit overlap values");
  table->add_option("--tau-min", tau_min, "grid start");
  table->add_option("--tau-max", tau_max, "grid end");
  table->add_option("--steps", steps, "grid size");
  table->add_option("--out", out, "write output to a file");

  // game scan / simulate / search
  CLI::App* game = app.add_subcommand("game", "comparison game");
  game->require_subcommand(1);
  CLI::App* scan = game->add_subcommand(
      "scan", "analytic strategy payoffs on canonical states");
  std::vector<std::string> strategies = {"coherent", "product", "blind"};
  scan->add_option("--tau", taus, "overlap values")->required();
  CLI::Option* scan_c = scan->add_option(
      "--c", c, "penalty (defaults to each overlap's certified penalty)");
  scan->add_option("--strategies", strategies, "subset of coherent,product,blind");
  scan->add_option("--out", out, "write output to a file");

  CLI::App* simulate = game->add_subcommand(
      "simulate", "Monte Carlo of the embedded session");
  simulate->add_option("file", file, "embedding JSON file")->required();
  simulate->add_option("--x0", x0, "first challenge symbol")->required();
  simulate->add_option("--x1", x1, "second challenge symbol")->required();
  simulate->add_option("--c", c, "penalty");
  simulate->add_option("--m", copies, "parallel copies per session");
  simulate->add_option("--trials", trials, "Monte Carlo sessions");
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--strategy", strategy, "coherent, product or blind")
      ->check(CLI::IsMember({"coherent", "product", "blind"}));
  simulate->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  simulate->add_option("--out", out, "write output to a file");

  CLI::App* search = game->add_subcommand(
      "search", "randomized search over separate-register strategies");
  search->add_option("--tau", tau, "overlap")->required();
  search->add_option("--c", c, "penalty")->required();
  search->add_option("--budget", budget, "candidates to evaluate");
  search->add_option("--seed", seed, "random seed");
  search->add_option("--out", out, "write output to a file");

  // certify
  CLI::App* certify = app.add_subcommand(
      "certify", "finite-penalty separation certificates plus search audit");
  certify->add_option("--tau", taus, "overlap values")->required();
  certify->add_option("--budget", budget, "search candidates per overlap");
  certify->add_option("--seed", seed, "search seed");
  certify->add_option("--format", format, "json (default) or csv")
      ->check(CLI::IsMember({"csv", "json"}));
  certify->add_option("--out", out, "write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (analyze->parsed()) return cmd_primitive_analyze(file, format, out);
    if (build->parsed()) return cmd_embed_build(file, out);
    if (classify->parsed()) return cmd_embed_classify(file, out);
    if (table->parsed()) {
      return cmd_bounds_table(taus, tau_min, tau_max, steps, out);
    }
    if (scan->parsed()) {
      return cmd_game_scan(taus, c, scan_c->count() > 0, strategies, out);
    }
    if (simulate->parsed()) {
      return cmd_game_simulate(file, x0, x1, c, copies, trials, seed, strategy,
                               format, out);
    }
    if (search->parsed()) return cmd_game_search(tau, c, budget, seed, out);
    if (certify->parsed()) return cmd_certify(taus, budget, seed, format, out);
    std::cerr << "no subcommand given\n";
    return kUsage;
  } catch (const embedgame::ValidationError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const embedgame::NotFoundError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const embedgame::ConvergenceError& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFailure;
  }
}
