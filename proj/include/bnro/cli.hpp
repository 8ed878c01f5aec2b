// Copyright 2026 The BNRO Concentrator Authors
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

#ifndef BNRO_CLI_HPP_
#define BNRO_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bnro {

enum class ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kCollision = 2,  // also: a task no configuration solves, a table misroute
  kBadFlags = 3,
  kIoError = 4,
};

struct RunSpec {
  std::string command;  // simulate verify table search bench compare trace
  std::optional<unsigned> n_layers;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> cycles;
  std::vector<double> probabilities;
  std::uint32_t pipeline_mask = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint32_t> scan_factor;
  unsigned workers = 1;
  std::string out;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

/// Parses argv into a RunSpec. Returns nullopt after printing help or a
/// parse error; `exit_code` receives the status to return.
std::optional<RunSpec> parse_args(int argc, const char* const* argv,
                                  std::ostream& out, std::ostream& err,
                                  int& exit_code);

int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse_args + run.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace bnro

#endif  // BNRO_CLI_HPP_
