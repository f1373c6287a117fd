// Copyright 2026 The SH-DPP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Subcommands: generate, train, summarize, benchmark
// (alias evaluate) and sweep. Options may also come from a TOML/INI file given
// with --config; command-line flags win over the file, the file over defaults.
// SHDPP_LOG selects stderr verbosity: quiet, error, warn, info (default) or
// debug.

#ifndef SHDPP_CLI_H_
#define SHDPP_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace shdpp {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // model, training or other errors
inline constexpr int kExitUsage = 2;    // bad flags or bad input values
inline constexpr int kExitIo = 3;

// `args` excludes the program name. Errors print one line to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace shdpp

#endif  // SHDPP_CLI_H_
