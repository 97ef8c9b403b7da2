// Copyright 2026 The dpci Authors
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

// The `dpci` command line, kept in the library so tests can drive it with
// in-memory streams.
//
//   dpci ci          one interval for a data file, printed as JSON
//   dpci experiment  coverage or MoE over a grid of cells, printed as CSV
//   dpci sweep       MoE across values of rho or b, printed as CSV
//   dpci bias        sampler bias for quantile fractions, printed as CSV
//   dpci replay      reruns the command recorded in a manifest
//
// Every successful command also writes a run manifest (JSON) to stderr, or
// to the file given by --manifest.

#ifndef DPCI_CLI_H_
#define DPCI_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dpci::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitBadParams = 3;
inline constexpr int kExitTooSmall = 4;

inline constexpr absl::string_view kVersion = "0.1.0";

// Runs one command. `args` excludes the program name. `in` backs
// `--input -`.
int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

// FNV-1a, 64-bit.
std::uint64_t Fnv1a64(absl::string_view bytes);

// One number per line. With `header` the first line is skipped. Blank or
// non-numeric lines fail with InvalidArgument naming the 1-based line.
absl::StatusOr<std::vector<double>> ParseValues(absl::string_view text,
                                                bool header);

// 17 significant digits, enough to round-trip any double.
std::string FormatDouble(double value);

// Exit code for a failed library call: InvalidArgument maps to
// kExitBadParams, FailedPrecondition to kExitTooSmall, anything else to
// kExitUsage.
int ExitCodeFor(const absl::Status& status);

}  // namespace dpci::cli

#endif  // DPCI_CLI_H_
