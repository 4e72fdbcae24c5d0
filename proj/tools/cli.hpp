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

#ifndef SCAMP_TOOLS_CLI_HPP_
#define SCAMP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace scamp::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNeverSucceeds = 3;
inline constexpr int kExitMismatch = 4;

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace scamp::cli

#endif  // SCAMP_TOOLS_CLI_HPP_
