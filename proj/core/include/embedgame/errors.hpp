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

#ifndef EMBEDGAME_ERRORS_HPP_
#define EMBEDGAME_ERRORS_HPP_

#include <stdexcept>

namespace embedgame {

// An input violated a documented precondition or failed an invariant check
// (non-normalized distribution, non-PSD operator, malformed file, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric routine failed to reach its documented tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation would act outside a single party's register on a single copy.
class LocalityViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested object does not exist (e.g. no usable comparison pair).
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace embedgame

#endif  // EMBEDGAME_ERRORS_HPP_
