// Copyright 2026 The clusterft Authors
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

// Command-line surface of clusterft.

#ifndef CLUSTERFT_TOOLS_CLI_H
#define CLUSTERFT_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace clusterft {

/// Exit codes of run_cli.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

/// Runs the CLI; args[0] is the program name. Reports go to `out` unless
/// --out (or CLUSTERFT_OUT_DIR) redirects them to a file.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace clusterft

#endif
