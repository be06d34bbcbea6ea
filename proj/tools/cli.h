// Copyright 2026 The ppcard Authors
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


// The ppcard command line: subcommand dispatch, config loading and exit
// codes, callable in-process from tests.

#ifndef PPCARD_TOOLS_CLI_H_
#define PPCARD_TOOLS_CLI_H_

#include <string>
#include <vector>

#include "absl/status/status.h"

namespace ppcard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInvariant = 4;

// InvalidArgument and NotFound are config errors; DataLoss,
// FailedPrecondition, OutOfRange and PermissionDenied are data errors;
// everything else is an invariant violation.
int ExitCodeFor(const absl::Status& status);

// args[0] is the program name.
int Run(const std::vector<std::string>& args);

}  // namespace ppcard::cli

#endif  // PPCARD_TOOLS_CLI_H_
