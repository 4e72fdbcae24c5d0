// Copyright 2026 The scamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCAMP_ERRORS_HPP_
#define SCAMP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace scamp {

/// A parameter violates a type invariant or an operation precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The post-selection event has probability zero, so conditional quantities
/// (fidelity, conditional input probabilities, noise figure) do not exist.
class NeverSucceeds : public std::domain_error {
 public:
  NeverSucceeds() : std::domain_error("device never succeeds (P(S) = 0)") {}
};

/// An iterative numerical routine hit its work limit before converging.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scamp

#endif  // SCAMP_ERRORS_HPP_
