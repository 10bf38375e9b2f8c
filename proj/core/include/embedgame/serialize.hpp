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
// JSON and CSV interchange. All output is deterministic: object keys are
// sorted, and doubles print as the shortest decimal that round-trips.

#ifndef EMBEDGAME_SERIALIZE_HPP_
#define EMBEDGAME_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "embedgame/discrimination.hpp"
#include "embedgame/embedding.hpp"
#include "embedgame/game.hpp"
#include "embedgame/ideal.hpp"
#include "embedgame/primitive.hpp"
#include "embedgame/states.hpp"

namespace embedgame {

// Shortest decimal representation that parses back to exactly `v`.
std::string format_double(double v);

// Primitive wire format:
//   {"x": ["0", "1"], "y": [...], "p": [[...], ...]}
// Probability entries may be JSON numbers or decimal strings ("0.375"), so
// exact constants survive editors that mangle number formatting.
std::string to_json(const Primitive& p);
Primitive primitive_from_json(const std::string& text);

// {"dims": [...], "amplitudes": [[re, im], ...]}
std::string to_json(const PureState& s);
PureState pure_state_from_json(const std::string& text);

// {"primitive": {...}, "bob_dim": d, "weights": [...], "states": [...],
//  "phases": [[...], ...]}
std::string to_json(const RegularEmbedding& e);
RegularEmbedding embedding_from_json(const std::string& text);

std::string to_json(const GapCertificate& cert);

std::string to_json(const EigenAsymptoticsReport& report);

std::string to_json(const PayoffReport& report);

// Session transcript: [{"party": "alice", "copy": 0, ...}, ...]
std::string to_json(const std::vector<QueryRecord>& log);

// "index,eigenvalue" rows, ascending, for quick spectrum inspection.
std::string eigenvalues_csv(const DensityOp& rho);

// Whole-file text helpers; both throw ValidationError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace embedgame

#endif  // EMBEDGAME_SERIALIZE_HPP_
